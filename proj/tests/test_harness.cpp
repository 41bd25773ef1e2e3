#include "betticover/harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

using namespace betticover;

namespace {

MainCampaign small_campaign() {
  MainCampaign c;
  c.dims = {2, 3};
  c.primes = {101, 32003};
  c.trials = 25;
  c.seed = 9;
  return c;
}

nlohmann::json without_timing(nlohmann::json j) {
  j["summary"].erase("elapsed_seconds");
  return j;
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("BETTICOVER_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("BETTICOVER_THREADS"); }
};

}  // namespace

TEST_CASE("trial mix parsing") {
  CHECK(TrialMix::parse("default").weights == std::array<unsigned, 4>{40, 30, 15, 15});
  CHECK(TrialMix::parse("").weights == std::array<unsigned, 4>{40, 30, 15, 15});
  CHECK(TrialMix::parse("planted-only").weights == std::array<unsigned, 4>{0, 1, 0, 0});
  CHECK(TrialMix::parse("collinear-only").weights == std::array<unsigned, 4>{0, 0, 0, 1});
  CHECK(TrialMix::parse("random=1,moment=3").weights == std::array<unsigned, 4>{1, 0, 3, 0});
  CHECK(TrialMix::parse(TrialMix{}.describe()).weights == TrialMix{}.weights);
  CHECK(TrialMix{}.describe() == "random=40,planted=30,moment=15,collinear=15");
  CHECK_THROWS(TrialMix::parse("planted"));
  CHECK_THROWS(TrialMix::parse("bogus=3"));
  CHECK_THROWS(TrialMix::parse("random=x"));
  CHECK_THROWS(TrialMix::parse("random=0"));
  CHECK(to_string(TrialKind::Collinear) == "collinear");
}

TEST_CASE("trial mix draws follow the weights") {
  Rng rng(2);
  std::array<std::size_t, 4> counts{};
  const TrialMix mix;
  for (int k = 0; k < 20000; ++k) ++counts[static_cast<std::size_t>(mix.draw(rng))];
  CHECK(counts[0] > 7600);
  CHECK(counts[0] < 8400);
  CHECK(counts[1] > 5600);
  CHECK(counts[1] < 6400);
  CHECK(counts[2] > 2600);
  CHECK(counts[3] > 2600);
  const auto only = TrialMix::parse("moment-only");
  for (int k = 0; k < 100; ++k) CHECK(only.draw(rng) == TrialKind::Moment);
}

TEST_CASE("ranges, seeds and thread count") {
  CHECK(parse_range("1..6") == std::pair<std::size_t, std::size_t>{1, 6});
  CHECK(parse_range("3") == std::pair<std::size_t, std::size_t>{3, 3});
  CHECK_THROWS(parse_range("6..1"));
  CHECK_THROWS(parse_range("a..b"));
  CHECK_THROWS(parse_range(""));

  CHECK(trial_seed(1, 5) == trial_seed(1, 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(trial_seed(1, k));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));

  {
    ThreadsEnv env("3");
    CHECK(harness_threads() == 3);
  }
  {
    ThreadsEnv env("zero");
    CHECK(harness_threads() >= 1);
  }
}

TEST_CASE("instance families") {
  const PrimeField f(101);
  Rng rng(4);
  for (auto kind : {TrialKind::Random, TrialKind::Planted, TrialKind::Moment, TrialKind::Collinear}) {
    for (std::size_t size = 4; size <= 9; ++size) {
      const auto x = draw_instance(f, 3, size, kind, rng);
      REQUIRE(x.size() == size);
      REQUIRE(is_nondegenerate(x));
      if (kind == TrialKind::Planted) REQUIRE(is_Dt(Matroid::from_points(x), 3));
      if (kind == TrialKind::Moment) REQUIRE(is_linearly_general(x));
    }
  }
  CHECK_THROWS(draw_instance(f, 3, 3, TrialKind::Random, rng));
  CHECK_THROWS_AS(draw_instance(PrimeField(2), 2, 8, TrialKind::Random, rng), FieldTooSmall);
  CHECK_THROWS_AS(draw_instance(PrimeField(3), 2, 5, TrialKind::Moment, rng), FieldTooSmall);
}

TEST_CASE("verify-main is deterministic across thread counts") {
  nlohmann::json one, many;
  {
    ThreadsEnv env("1");
    one = without_timing(to_json(run_verify_main(small_campaign())));
  }
  {
    ThreadsEnv env("4");
    many = without_timing(to_json(run_verify_main(small_campaign())));
  }
  CHECK(one == many);
  REQUIRE(one["trials"].size() == 100);
  for (std::size_t k = 0; k < 100; ++k) CHECK(one["trials"][k]["trial"] == k);

  // A single trial replays from (seed, index) alone.
  const auto replay = to_json(run_main_trial(small_campaign(), 3, 32003, 77));
  CHECK(replay == one["trials"][77]);
}

TEST_CASE("verify-main small campaign") {
  const auto r = run_verify_main(small_campaign());
  CHECK(r.ok());
  CHECK(r.disagreements == 0);
  CHECK(r.agreements == 100);
  CHECK(r.skipped == 0);
  CHECK(r.socle_unavailable == 0);
  std::size_t covers = 0;
  for (const auto& t : r.records) {
    CHECK(t.agree);
    CHECK(t.structural_ok);
    CHECK(t.isoc_betti == t.isoc_socle);
    CHECK(t.size >= t.n + 1);
    CHECK(t.size <= t.n + 6);
    if (t.has_cover) {
      ++covers;
      CHECK(t.cover["normalized_a"].get<std::size_t>() + t.cover["normalized_b"].get<std::size_t>() == t.n - 1);
      CHECK(t.cover["disjoint"] == true);
      CHECK(t.isoc_betti == 1);
    }
  }
  CHECK(covers > 20);
  CHECK(covers < 90);

  const auto j = to_json(r);
  CHECK(j["summary"]["disagreements"] == 0);
  CHECK(j["disagreements"].empty());
  CHECK(j["config"]["sizes"] == "1..6");
  CHECK(j["config"]["mix"] == "random=40,planted=30,moment=15,collinear=15");
  CHECK(nlohmann::json::parse(j.dump()) == j);
}

TEST_CASE("verify-main edge campaigns") {
  auto c = small_campaign();
  c.trials = 0;
  const auto empty = run_verify_main(c);
  CHECK(empty.records.empty());
  CHECK(empty.ok());
  CHECK(to_json(empty)["trials"].empty());

  c = small_campaign();
  c.mix = TrialMix::parse("planted-only");
  for (const auto& t : run_verify_main(c).records) {
    CHECK(t.has_cover);
    CHECK(t.beta != 0);
    CHECK(t.kind == TrialKind::Planted);
  }

  c = small_campaign();
  c.size_lo = 1;
  c.size_hi = 1;
  c.mix = TrialMix::parse("moment-only");
  // n + 1 points in general position always sit on two complementary planes.
  for (const auto& t : run_verify_main(c).records) CHECK(t.has_cover);

  c = small_campaign();
  c.size_lo = 2;
  c.size_hi = 2;
  for (const auto& t : run_verify_main(c).records) {
    if (t.kind == TrialKind::Moment) {
      CHECK_FALSE(t.has_cover);
      CHECK(t.isoc_betti == 2);
    }
  }

  c = small_campaign();
  c.size_lo = 3;
  c.size_hi = 1;
  CHECK_THROWS(run_verify_main(c));
}

TEST_CASE("verify-main over tiny fields falls back or skips") {
  MainCampaign c;
  c.dims = {2};
  c.primes = {2, 3};
  c.trials = 60;
  const auto r = run_verify_main(c);
  CHECK(r.ok());
  CHECK(r.skipped > 0);
  CHECK(r.agreements + r.skipped == 120);
  for (const auto& t : r.records) {
    if (t.skipped) {
      CHECK(t.p == 2);
      CHECK(t.size == 8);
      CHECK_FALSE(t.skip_reason.empty());
    }
  }
}

TEST_CASE("repro files are only written on trouble") {
  const auto dir = std::filesystem::temp_directory_path() / "betticover_repro_test";
  std::filesystem::remove_all(dir);
  auto c = small_campaign();
  c.repro_dir = dir;
  CHECK(run_verify_main(c).ok());
  CHECK_FALSE(std::filesystem::exists(dir));
}

TEST_CASE("verify-matroid campaigns") {
  MatroidCampaign c;
  c.trials = 60;
  c.planted = 10;
  const auto r = run_verify_matroid(c);
  CHECK(r.ok());
  CHECK(r.counterexamples == 0);
  CHECK(r.moment_instances == 15);
  CHECK(r.moment_not_uniform == 0);
  CHECK(r.conclusion_uniform >= 15);
  CHECK(r.records.size() == r.hypothesis_fails + r.conclusion_uniform + r.counterexamples);
  for (const auto& t : r.records) {
    if (t.kind == "planted") CHECK(t.verdict == DeletionVerdict::HypothesisFails);
  }
  CHECK(without_timing(to_json(r)) == without_timing(to_json(run_verify_matroid(c))));

  c.concurrent = true;
  const auto adv = run_verify_matroid(c);
  CHECK_FALSE(adv.ok());
  CHECK(adv.counterexamples == 2);
  for (const auto& t : adv.records) {
    if (t.verdict == DeletionVerdict::Counterexample) {
      CHECK(t.kind == "concurrent-lines");
      CHECK_FALSE(t.transcript.empty());
    }
  }
}

TEST_CASE("isoc bridge and monotonicity") {
  const auto b = run_isoc_bridge(40, 4, 101, 3);
  CHECK(b.compared + b.skipped_no_form == 40);
  CHECK(b.mismatches == 0);
  CHECK(b.structural_failures == 0);
  const auto m = run_monotonicity(20, 101, 3);
  CHECK(m.pairs == 20);
  CHECK(m.violations == 0);
  CHECK(m.structural_failures == 0);
}
