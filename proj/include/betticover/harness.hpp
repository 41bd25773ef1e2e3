#pragma once

#include "betticover/betti_koszul.hpp"
#include "betticover/matroid.hpp"
#include "betticover/point_config.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace betticover {

enum class TrialKind { Random, Planted, Moment, Collinear };
std::string to_string(TrialKind k);

/// Relative weights of the four instance families.
struct TrialMix {
  std::array<unsigned, 4> weights{40, 30, 15, 15};

  /// "default", "<kind>-only" or "random=40,planted=30,moment=15,collinear=15".
  static TrialMix parse(const std::string& text);
  std::string describe() const;
  TrialKind draw(Rng& rng) const;
};

/// Inclusive range like "1..6"; a single number means a one-element range.
std::pair<std::size_t, std::size_t> parse_range(const std::string& text);

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Worker count: BETTICOVER_THREADS when set, otherwise hardware concurrency.
std::size_t harness_threads();

struct MainCampaign {
  std::vector<std::size_t> dims{2, 3, 4};
  std::vector<Word> primes{101, 32003};
  /// Sizes are n + size_lo .. n + size_hi.
  std::size_t size_lo = 1;
  std::size_t size_hi = 6;
  /// Trials per (n, p) pair.
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  TrialMix mix;
  /// Where repro files go on disagreement; nothing is written when empty.
  std::optional<std::filesystem::path> repro_dir;
};

struct MainTrial {
  std::size_t index = 0;
  std::size_t n = 0;
  Word p = 0;
  TrialKind kind = TrialKind::Random;
  std::size_t size = 0;
  std::uint64_t hash = 0;
  std::size_t beta = 0;  // beta_{n,n+1}
  bool has_cover = false;
  nlohmann::json cover;  // certificate plus normalized a, b, or null
  bool cover_disjoint = true;
  std::optional<std::size_t> isoc_betti;
  std::optional<std::size_t> isoc_socle;
  bool agree = true;
  bool structural_ok = true;
  std::string structural_failures;
  bool skipped = false;  // the field cannot host a nondegenerate set of this size
  std::string skip_reason;
  std::optional<PointConfig> instance;  // kept only when something disagreed
  std::optional<std::filesystem::path> repro_file;
};

struct MainReport {
  MainCampaign campaign;
  std::vector<MainTrial> records;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t isoc_mismatches = 0;
  std::size_t structural_failures = 0;
  std::size_t cover_not_disjoint = 0;
  std::size_t socle_unavailable = 0;
  std::size_t skipped = 0;
  double elapsed_seconds = 0;

  bool ok() const { return disagreements == 0 && isoc_mismatches == 0 && structural_failures == 0 && cover_not_disjoint == 0; }
};

/// Draws the instance for global trial `index` of the (n, p) pair.
PointConfig draw_instance(const PrimeField& field, std::size_t n, std::size_t size, TrialKind kind, Rng& rng);

MainReport run_verify_main(const MainCampaign& c);
MainTrial run_main_trial(const MainCampaign& c, std::size_t n, Word p, std::size_t index);
nlohmann::json to_json(const MainTrial& t);
nlohmann::json to_json(const MainReport& r);

struct MatroidCampaign {
  /// Random instances use rank n + 1 for n drawn from this list.
  std::vector<std::size_t> dims{1, 2, 3, 4};
  std::vector<Word> primes{101, 32003};
  std::size_t max_elements = 10;
  std::size_t trials = 300;
  std::uint64_t seed = 1;
  /// Moment-curve instances with n + 2 points for these n, five parameter sets each.
  std::vector<std::size_t> moment_dims{2, 3, 4};
  std::size_t planted = 30;
  /// Adds concurrent_lines_config for each moment n >= 3. Every one of these
  /// is a COUNTEREXAMPLE to the deletion statement.
  bool concurrent = false;
};

struct MatroidTrial {
  std::size_t index = 0;
  std::string kind;
  std::size_t n = 0;
  Word p = 0;
  std::size_t elements = 0;
  DeletionVerdict verdict = DeletionVerdict::HypothesisFails;
  std::vector<std::string> transcript;  // kept for counterexamples
};

struct MatroidReport {
  MatroidCampaign campaign;
  std::vector<MatroidTrial> records;
  std::size_t hypothesis_fails = 0;
  std::size_t conclusion_uniform = 0;
  std::size_t counterexamples = 0;
  std::size_t moment_instances = 0;
  std::size_t moment_not_uniform = 0;
  double elapsed_seconds = 0;

  bool ok() const { return counterexamples == 0 && moment_not_uniform == 0; }
};

MatroidReport run_verify_matroid(const MatroidCampaign& c);
nlohmann::json to_json(const MatroidReport& r);

/// isoc via Betti numbers against isoc via socle on random nondegenerate configs.
struct BridgeReport {
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  std::size_t skipped_no_form = 0;
  std::size_t structural_failures = 0;
};
BridgeReport run_isoc_bridge(std::size_t instances, std::size_t max_n, Word p, std::uint64_t seed);

/// Nested X in X' with isoc(X') = 1: counts subsets X whose isoc is not 1.
struct MonotonicityReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t structural_failures = 0;
};
MonotonicityReport run_monotonicity(std::size_t pairs, Word p, std::uint64_t seed);

}  // namespace betticover
