#include "betticover/betti_koszul.hpp"
#include "betticover/matroid.hpp"
#include "betticover/stanley_reisner.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace betticover;

namespace {

const PrimeField F101(101);

using Entries = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

PointConfig pts(std::size_t n, const std::vector<std::vector<long long>>& rows) {
  return PointConfig::from_coordinates(F101, n, rows);
}

PointConfig moment(std::size_t n, std::size_t count) {
  std::vector<Word> params(count);
  std::iota(params.begin(), params.end(), Word{0});
  return moment_curve_config(F101, n, params);
}

PointConfig random_instance(const PrimeField& f, Rng& rng, int trial) {
  const std::size_t n = gen::between(rng, 1, 3);
  const std::size_t size = gen::between(rng, n + 1, n + 5);
  if (trial % 3 == 0 && n >= 2) {
    const std::size_t a = gen::between(rng, 0, n - 1);
    const std::size_t b = n - 1 - a;
    const std::size_t c1 = a + 1 + (a > 0 ? gen::between(rng, 0, 2) : 0);
    const std::size_t c2 = b + 1 + (b > 0 ? gen::between(rng, 0, 2) : 0);
    return two_plane_config(f, n, a, b, c1, c2, rng);
  }
  return gen::nondegenerate(f, n, size, rng);
}

}  // namespace

// Reference tables from an independent Koszul-complex computation over F_101
// that never touches standard monomials.
TEST_CASE("golden Betti tables") {
  CHECK(betti_table(pts(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).entries() == Entries{{{0, 0}, 1}, {{1, 2}, 3}, {{2, 3}, 2}});
  CHECK(betti_table(moment(2, 4)).entries() == Entries{{{0, 0}, 1}, {{1, 2}, 2}, {{2, 4}, 1}});
  CHECK(betti_table(moment(3, 5)).entries() == Entries{{{0, 0}, 1}, {{1, 2}, 5}, {{2, 3}, 5}, {{3, 5}, 1}});
  CHECK(betti_table(moment(4, 6)).entries() ==
        Entries{{{0, 0}, 1}, {{1, 2}, 9}, {{2, 3}, 16}, {{3, 4}, 9}, {{4, 6}, 1}});
  CHECK(betti_table(pts(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}})).entries() ==
        Entries{{{0, 0}, 1}, {{1, 2}, 4}, {{1, 3}, 2}, {{2, 3}, 4}, {{2, 4}, 4}, {{3, 4}, 1}, {{3, 5}, 2}});
  CHECK(betti_table(pts(3, {{0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 1}})).entries() ==
        Entries{{{0, 0}, 1}, {{1, 2}, 4}, {{2, 3}, 2}, {{2, 4}, 3}, {{3, 5}, 2}});
  CHECK(betti_table(pts(2, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 2, 3}})).entries() ==
        Entries{{{0, 0}, 1}, {{1, 2}, 1}, {{1, 3}, 2}, {{2, 4}, 2}});
}

TEST_CASE("main predicate and isoc on the golden instances") {
  CHECK(main_predicate(pts(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
  for (std::size_t n = 2; n <= 5; ++n) {
    CHECK_FALSE(main_predicate(moment(n, n + 2)));
    CHECK(isoc_via_betti(moment(n, n + 2)) == 2);
    CHECK(betti_number(moment(n, n + 2), n, n + 2) == 1);
  }
  for (std::size_t n = 3; n <= 4; ++n) {
    const auto c = concurrent_lines_config(F101, n);
    CHECK_FALSE(main_predicate(c));
    CHECK(isoc_via_betti(c) == 2);
  }
  CHECK(main_predicate(pts(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}})));
  CHECK_THROWS(main_predicate(pts(2, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}})));
}

TEST_CASE("single Betti numbers match the full table") {
  const auto x = pts(3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}});
  const auto t = betti_table(x);
  for (std::size_t i = 0; i <= 4; ++i) {
    for (std::size_t j = 0; j <= 6; ++j) CHECK(betti_number(x, i, j) == t(i, j));
  }
  CHECK_THROWS(betti_number(x, 5, 6));
}

TEST_CASE("polynomial ring and a single point") {
  // S itself: the Koszul complex is exact apart from beta_{0,0}.
  const auto simplex = stanley_reisner_quotient(full_simplex(4), F101, 6);
  CHECK(koszul_betti(simplex, KoszulWindow{5, 9}).table.entries() == Entries{{{0, 0}, 1}});

  // One point of P^2 is a complete intersection of two linear forms.
  const auto q = point_quotient(pts(2, {{1, 2, 3}}), 3);
  CHECK(koszul_betti(q, KoszulWindow{2, 4}).table.entries() == Entries{{{0, 0}, 1}, {{1, 1}, 2}, {{2, 2}, 1}});
}

TEST_CASE("render and JSON") {
  const auto t = betti_table(pts(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  const std::string r = render(t, std::make_pair(std::size_t{2}, std::size_t{3}));
  CHECK(r.find("[2]") != std::string::npos);
  CHECK(r.find("total:") != std::string::npos);
  CHECK(render(t).find('[') == std::string::npos);
  CHECK(betti_table_from_json(to_json(t)) == t);
  CHECK_THROWS(betti_table_from_json(nlohmann::json::parse(R"({"betti": 3})")));
}

TEST_CASE("property: Koszul differentials square to zero") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_instance(trial % 2 ? F101 : PrimeField(5), rng, trial);
    const std::size_t nvars = x.dim() + 1;
    const auto q = point_quotient(x, regularity_index(x) + 2);
    for (std::size_t j = 2; j <= q.top_degree() + 1; ++j) {
      for (std::size_t i = 2; i <= std::min(nvars, j); ++i) {
        if (j - i + 2 > q.top_degree()) continue;
        const auto upper = koszul_slice(q, i, j);
        const auto lower = koszul_slice(q, i - 1, j);
        REQUIRE(upper.differential.rows() == static_cast<Index>(lower.basis.size()));
        REQUIRE(multiply(lower.differential, upper.differential).is_zero());
      }
    }
  }
}

TEST_CASE("property: structure checks, invariance and the cover criterion") {
  Rng rng(12);
  for (Word p : {Word{101}, Word{32003}, Word{7}}) {
    const PrimeField f(p);
    for (int trial = 0; trial < 45; ++trial) {
      const auto x = random_instance(f, rng, trial);
      const std::size_t n = x.dim();
      const auto a = analyze_betti(x);
      const auto checks = check_structure(a);
      INFO(format_config(x));
      REQUIRE_MESSAGE(checks.all(), checks.failures());
      REQUIRE(hilbert_series_identity(a.table, a.hilbert));

      const bool beta = a.table(n, n + 1) != 0;
      REQUIRE(beta == main_predicate(x));
      REQUIRE(beta == is_Dt(Matroid::from_points(x), n).has_value());
      REQUIRE((isoc_from_table(a.table, n) == 1) == beta);

      std::vector<std::size_t> order(x.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      REQUIRE(betti_table(x.subset(order)) == a.table);
      const auto moved = apply_linear_map(x, random_invertible(f, static_cast<Index>(n + 1), rng));
      REQUIRE(betti_table(moved) == a.table);
    }
  }
}

TEST_CASE("Hilbert identity catches a corrupted table") {
  auto a = analyze_betti(moment(3, 5));
  REQUIRE(hilbert_series_identity(a.table, a.hilbert));
  a.table.set(2, 3, a.table(2, 3) + 1);
  CHECK_FALSE(hilbert_series_identity(a.table, a.hilbert));
  CHECK_FALSE(check_structure(a).all());
}
