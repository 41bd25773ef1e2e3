#include "betticover/harness.hpp"

#include "betticover/graded_ring.hpp"
#include "betticover/stanley_reisner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace betticover {

namespace {

constexpr std::array<const char*, 4> kKindNames{"random", "planted", "moment", "collinear"};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// Runs body(k) for k in [0, count) on the harness worker pool.
template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers = std::min(harness_threads(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Feasible (a, c1) for a planted two-plane configuration of `size` points.
std::optional<std::pair<std::size_t, std::size_t>> plant_shape(Word p, std::size_t n, std::size_t size, Rng& rng) {
  std::vector<std::size_t> dims(n);
  std::iota(dims.begin(), dims.end(), 0);
  std::shuffle(dims.begin(), dims.end(), rng);
  for (auto a : dims) {
    const std::size_t b = n - 1 - a;
    const std::size_t cap_a = projective_space_size(p, a);
    const std::size_t cap_b = projective_space_size(p, b);
    const std::size_t lo = std::max(a + 1, size > cap_b ? size - cap_b : std::size_t{0});
    if (size < b + 1) continue;
    const std::size_t hi = std::min(size - b - 1, cap_a);
    if (lo > hi) continue;
    return std::make_pair(a, lo + uniform_index(rng, hi - lo + 1));
  }
  return std::nullopt;
}

PointConfig nondegenerate_random(const PrimeField& field, std::size_t n, std::size_t size, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    PointConfig x = random_config(field, n, size, rng);
    if (is_nondegenerate(x)) return x;
  }
  throw FieldTooSmall("no nondegenerate random configuration found");
}

PointConfig with_collinear_points(const PrimeField& field, std::size_t n, std::size_t size, Rng& rng) {
  const std::size_t extra = size > n + 1 ? 1 + uniform_index(rng, size - n - 1) : 0;
  const PointConfig base = nondegenerate_random(field, n, size - extra, rng);
  std::vector<ProjPoint> pts = base.points();
  std::set<ProjPoint> seen(pts.begin(), pts.end());
  const std::vector<Word> u = pts[0].coords;
  const std::vector<Word> v = pts[1].coords;
  std::uniform_int_distribution<Word> scalar(1, field.modulus() - 1);
  // The line through the first two points carries at most p - 1 new points.
  for (int guard = 0; pts.size() < size && guard < 10000; ++guard) {
    const Word lambda = scalar(rng);
    std::vector<Word> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) w[k] = field.add(u[k], field.mul(lambda, v[k]));
    if (std::all_of(w.begin(), w.end(), [](Word c) { return c == 0; })) continue;
    ProjPoint q = normalize(field, std::move(w));
    if (seen.insert(q).second) pts.push_back(std::move(q));
  }
  if (pts.size() < size) throw FieldTooSmall("line too short for the requested collinear points");
  std::shuffle(pts.begin(), pts.end(), rng);
  return PointConfig(field, n, std::move(pts));
}

nlohmann::json optional_json(const std::optional<std::size_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

std::string to_string(TrialKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

TrialMix TrialMix::parse(const std::string& text) {
  TrialMix mix;
  if (text.empty() || text == "default") return mix;
  for (std::size_t k = 0; k < kKindNames.size(); ++k) {
    if (text == std::string(kKindNames[k]) + "-only") {
      mix.weights.fill(0);
      mix.weights[k] = 1;
      return mix;
    }
  }
  mix.weights.fill(0);
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("mix entry '" + item + "' lacks '='");
    const std::string name = item.substr(0, eq);
    const auto it = std::find(kKindNames.begin(), kKindNames.end(), name);
    if (it == kKindNames.end()) throw std::invalid_argument("unknown mix kind '" + name + "'");
    try {
      mix.weights[static_cast<std::size_t>(it - kKindNames.begin())] = static_cast<unsigned>(std::stoul(item.substr(eq + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad weight in '" + item + "'");
    }
  }
  if (std::accumulate(mix.weights.begin(), mix.weights.end(), 0U) == 0) {
    throw std::invalid_argument("mix weights sum to zero");
  }
  return mix;
}

std::string TrialMix::describe() const {
  std::string out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    out += (k ? "," : "") + std::string(kKindNames[k]) + "=" + std::to_string(weights[k]);
  }
  return out;
}

TrialKind TrialMix::draw(Rng& rng) const {
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return static_cast<TrialKind>(pick(rng));
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const auto v = std::stoul(text);
      return {v, v};
    }
    const auto lo = std::stoul(text.substr(0, dots));
    const auto hi = std::stoul(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty range");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("range '" + text + "' is not of the form lo..hi");
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over seed xor trial index.
  std::uint64_t z = (seed ^ trial) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t harness_threads() {
  if (const char* env = std::getenv("BETTICOVER_THREADS")) {
    try {
      const auto v = std::stoul(env);
      if (v > 0) return v;
    } catch (const std::logic_error&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

PointConfig draw_instance(const PrimeField& field, std::size_t n, std::size_t size, TrialKind kind, Rng& rng) {
  if (size < n + 1) throw std::invalid_argument("nondegenerate configurations need at least n + 1 points");
  switch (kind) {
    case TrialKind::Random:
      return nondegenerate_random(field, n, size, rng);
    case TrialKind::Planted: {
      const auto shape = plant_shape(field.modulus(), n, size, rng);
      if (!shape) throw FieldTooSmall("no two-plane shape fits " + std::to_string(size) + " points");
      const auto [a, c1] = *shape;
      return two_plane_config(field, n, a, n - 1 - a, c1, size - c1, rng);
    }
    case TrialKind::Moment: {
      if (size > field.modulus()) throw FieldTooSmall("moment curve needs distinct parameters");
      std::vector<Word> all(field.modulus());
      std::iota(all.begin(), all.end(), Word{0});
      std::vector<Word> params;
      std::sample(all.begin(), all.end(), std::back_inserter(params), static_cast<std::ptrdiff_t>(size), rng);
      const PointConfig x = moment_curve_config(field, n, params);
      return apply_linear_map(x, random_invertible(field, static_cast<Index>(n + 1), rng));
    }
    case TrialKind::Collinear:
      return with_collinear_points(field, n, size, rng);
  }
  throw std::logic_error("unknown trial kind");
}

namespace {

// Not every family fits every (p, n, size); those draws become random ones.
PointConfig draw_or_fall_back(const PrimeField& field, std::size_t n, std::size_t size, TrialKind& kind, Rng& rng) {
  try {
    return draw_instance(field, n, size, kind, rng);
  } catch (const FieldTooSmall&) {
    kind = TrialKind::Random;
    return draw_instance(field, n, size, kind, rng);
  }
}

}  // namespace

MainTrial run_main_trial(const MainCampaign& c, std::size_t n, Word p, std::size_t index) {
  const PrimeField field(p);
  Rng rng(trial_seed(c.seed, index));
  MainTrial t;
  t.index = index;
  t.n = n;
  t.p = p;
  t.kind = c.mix.draw(rng);
  t.size = n + c.size_lo + uniform_index(rng, c.size_hi - c.size_lo + 1);
  std::optional<PointConfig> drawn;
  try {
    drawn = draw_or_fall_back(field, n, t.size, t.kind, rng);
  } catch (const FieldTooSmall& e) {
    t.skipped = true;
    t.skip_reason = e.what();
    return t;
  }
  const PointConfig& x = *drawn;
  t.hash = config_hash(x);

  const BettiAnalysis a = analyze_betti(x);
  const StructuralChecks checks = check_structure(a);
  t.structural_ok = checks.all();
  t.structural_failures = checks.failures();
  t.beta = a.table(n, n + 1);

  const Matroid m = Matroid::from_points(x);
  if (const auto cert = is_Dt(m, n)) {
    t.has_cover = true;
    const NormalizedCover nc = normalize_cover(m, *cert, n);
    t.cover = to_json(*cert, m);
    t.cover["normalized_a"] = nc.a;
    t.cover["normalized_b"] = nc.b;
    t.cover["disjoint"] = nc.disjoint;
    t.cover_disjoint = nc.disjoint;
  }
  try {
    t.isoc_betti = isoc_from_table(a.table, n);
  } catch (const std::logic_error&) {
    t.structural_ok = false;
    t.structural_failures += t.structural_failures.empty() ? "isoc-window" : ", isoc-window";
  }
  try {
    t.isoc_socle = isoc_via_socle(x);
  } catch (const FieldTooSmall&) {
  }
  t.agree = (t.beta != 0) == t.has_cover;

  const bool isoc_mismatch = t.isoc_socle && t.isoc_betti != t.isoc_socle;
  if (!t.agree || isoc_mismatch || !t.structural_ok || !t.cover_disjoint) {
    t.instance = x;
    if (c.repro_dir) {
      std::filesystem::create_directories(*c.repro_dir);
      const auto path = *c.repro_dir / ("repro_trial_" + std::to_string(index) + ".json");
      nlohmann::json j = to_json(x);
      j["seed"] = c.seed;
      j["trial"] = index;
      j["kind"] = to_string(t.kind);
      std::ofstream(path) << j.dump(2) << "\n";
      t.repro_file = path;
    }
  }
  return t;
}

MainReport run_verify_main(const MainCampaign& c) {
  if (c.size_lo < 1 || c.size_lo > c.size_hi) throw std::invalid_argument("sizes must satisfy 1 <= lo <= hi");
  const auto start = std::chrono::steady_clock::now();
  struct Task {
    std::size_t n;
    Word p;
    std::size_t index;
  };
  std::vector<Task> tasks;
  std::size_t pair = 0;
  for (auto n : c.dims) {
    for (auto p : c.primes) {
      for (std::size_t k = 0; k < c.trials; ++k) tasks.push_back({n, p, pair * c.trials + k});
      ++pair;
    }
  }
  MainReport r;
  r.campaign = c;
  r.records.resize(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t k) { r.records[k] = run_main_trial(c, tasks[k].n, tasks[k].p, tasks[k].index); });
  std::sort(r.records.begin(), r.records.end(), [](const MainTrial& a, const MainTrial& b) { return a.index < b.index; });

  for (const auto& t : r.records) {
    if (t.skipped) {
      ++r.skipped;
      continue;
    }
    (t.agree ? r.agreements : r.disagreements) += 1;
    if (!t.isoc_socle) ++r.socle_unavailable;
    if (t.isoc_socle && t.isoc_betti != t.isoc_socle) ++r.isoc_mismatches;
    if (!t.structural_ok) ++r.structural_failures;
    if (!t.cover_disjoint) ++r.cover_not_disjoint;
  }
  r.elapsed_seconds = seconds_since(start);
  return r;
}

nlohmann::json to_json(const MainTrial& t) {
  nlohmann::json j = {{"trial", t.index},
                      {"n", t.n},
                      {"p", t.p},
                      {"kind", to_string(t.kind)},
                      {"size", t.size},
                      {"hash", t.hash},
                      {"beta_n_n1", t.beta},
                      {"cover", t.has_cover},
                      {"certificate", t.cover},
                      {"isoc_betti", optional_json(t.isoc_betti)},
                      {"isoc_socle", optional_json(t.isoc_socle)},
                      {"agree", t.agree},
                      {"structural_ok", t.structural_ok}};
  if (t.skipped) j["skipped"] = t.skip_reason;
  if (!t.structural_ok) j["structural_failures"] = t.structural_failures;
  if (t.instance) j["instance"] = to_json(*t.instance);
  if (t.repro_file) j["repro_file"] = t.repro_file->string();
  return j;
}

nlohmann::json to_json(const MainReport& r) {
  const auto& c = r.campaign;
  nlohmann::json trials = nlohmann::json::array();
  nlohmann::json disagreeing = nlohmann::json::array();
  for (const auto& t : r.records) {
    trials.push_back(to_json(t));
    if (!t.agree) disagreeing.push_back(t.index);
  }
  return {{"config",
           {{"n", c.dims},
            {"p", c.primes},
            {"sizes", std::to_string(c.size_lo) + ".." + std::to_string(c.size_hi)},
            {"trials_per_pair", c.trials},
            {"seed", c.seed},
            {"mix", c.mix.describe()}}},
          {"summary",
           {{"trials", r.records.size()},
            {"agreements", r.agreements},
            {"disagreements", r.disagreements},
            {"isoc_mismatches", r.isoc_mismatches},
            {"socle_unavailable", r.socle_unavailable},
            {"skipped", r.skipped},
            {"structural_failures", r.structural_failures},
            {"cover_not_disjoint", r.cover_not_disjoint},
            {"elapsed_seconds", r.elapsed_seconds}}},
          {"disagreements", disagreeing},
          {"trials", trials}};
}

MatroidReport run_verify_matroid(const MatroidCampaign& c) {
  const auto start = std::chrono::steady_clock::now();
  struct Job {
    std::string kind;
    std::size_t n;
    Word p;
    std::optional<Matroid> matroid;
  };
  std::vector<Job> jobs;

  for (std::size_t k = 0; k < c.trials; ++k) {
    Rng rng(trial_seed(c.seed, k));
    const std::size_t n = c.dims[uniform_index(rng, c.dims.size())];
    const Word p = c.primes[uniform_index(rng, c.primes.size())];
    const PrimeField field(p);
    const std::size_t r = n + 1;
    const std::size_t lo = r + 1;
    const std::size_t m = c.max_elements > lo ? lo + uniform_index(rng, c.max_elements - lo + 1) : lo;
    std::uniform_int_distribution<Word> coeff(0, p - 1);
    // Nonzero vectors with repeats allowed; resample until the rank is n + 1.
    for (;;) {
      DenseStorage vs(static_cast<Index>(m), static_cast<Index>(r));
      for (Index i = 0; i < vs.rows(); ++i) {
        do {
          for (Index j = 0; j < vs.cols(); ++j) vs(i, j) = coeff(rng);
        } while ((vs.row(i).array() == 0).all());
      }
      Matroid mat = Matroid::linear(Matrix(field, vs));
      if (mat.rank() == r) {
        jobs.push_back({"random", n, p, std::move(mat)});
        break;
      }
    }
  }

  const PrimeField big(101);
  for (auto n : c.moment_dims) {
    Rng rng(trial_seed(c.seed, 1'000'000 + n));
    for (int set = 0; set < 5; ++set) {
      std::vector<Word> params(n + 2);
      if (set == 0) {
        std::iota(params.begin(), params.end(), Word{0});
      } else {
        std::vector<Word> all(101);
        std::iota(all.begin(), all.end(), Word{0});
        params.clear();
        std::sample(all.begin(), all.end(), std::back_inserter(params), static_cast<std::ptrdiff_t>(n + 2), rng);
      }
      jobs.push_back({"moment", n, 101, Matroid::from_points(moment_curve_config(big, n, params))});
    }
    jobs.push_back({"cycle-section", n, 101, Matroid::from_points(cycle_section_points(n, big))});
    if (c.concurrent && n >= 3) {
      jobs.push_back({"concurrent-lines", n, 101, Matroid::from_points(concurrent_lines_config(big, n))});
    }
  }

  for (std::size_t k = 0; k < c.planted; ++k) {
    Rng rng(trial_seed(c.seed, 2'000'000 + k));
    const std::size_t n = std::max<std::size_t>(1, c.dims[uniform_index(rng, c.dims.size())]);
    const std::size_t hi = std::max(c.max_elements, n + 2);
    const std::size_t size = n + 1 + uniform_index(rng, hi - n);
    const auto shape = plant_shape(101, n, size, rng);
    if (!shape) continue;
    const PointConfig x = two_plane_config(big, n, shape->first, n - 1 - shape->first, shape->second, size - shape->second, rng);
    jobs.push_back({"planted", n, 101, Matroid::from_points(x)});
  }

  MatroidReport rep;
  rep.campaign = c;
  rep.records.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t k) {
    const Job& job = jobs[k];
    DeletionCheck check = check_deletion_theorem(*job.matroid, job.n);
    MatroidTrial& t = rep.records[k];
    t.index = k;
    t.kind = job.kind;
    t.n = job.n;
    t.p = job.p;
    t.elements = job.matroid->size();
    t.verdict = check.verdict;
    if (check.verdict == DeletionVerdict::Counterexample) t.transcript = std::move(check.transcript);
  });

  for (const auto& t : rep.records) {
    switch (t.verdict) {
      case DeletionVerdict::HypothesisFails: ++rep.hypothesis_fails; break;
      case DeletionVerdict::ConclusionUniform: ++rep.conclusion_uniform; break;
      case DeletionVerdict::Counterexample: ++rep.counterexamples; break;
    }
    if (t.kind == "moment") {
      ++rep.moment_instances;
      if (t.verdict != DeletionVerdict::ConclusionUniform) ++rep.moment_not_uniform;
    }
  }
  rep.elapsed_seconds = seconds_since(start);
  return rep;
}

nlohmann::json to_json(const MatroidReport& r) {
  const auto& c = r.campaign;
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : r.records) {
    nlohmann::json j = {{"trial", t.index}, {"kind", t.kind},         {"n", t.n},
                        {"p", t.p},         {"elements", t.elements}, {"verdict", to_string(t.verdict)}};
    if (!t.transcript.empty()) j["transcript"] = t.transcript;
    trials.push_back(j);
  }
  return {{"config",
           {{"n", c.dims},
            {"p", c.primes},
            {"max_elements", c.max_elements},
            {"trials", c.trials},
            {"seed", c.seed},
            {"moment_n", c.moment_dims},
            {"planted", c.planted},
            {"concurrent", c.concurrent}}},
          {"summary",
           {{"instances", r.records.size()},
            {"hypothesis_fails", r.hypothesis_fails},
            {"conclusion_uniform", r.conclusion_uniform},
            {"counterexamples", r.counterexamples},
            {"moment_instances", r.moment_instances},
            {"moment_not_uniform", r.moment_not_uniform},
            {"elapsed_seconds", r.elapsed_seconds}}},
          {"trials", trials}};
}

BridgeReport run_isoc_bridge(std::size_t instances, std::size_t max_n, Word p, std::uint64_t seed) {
  const PrimeField field(p);
  const TrialMix mix;
  BridgeReport rep;
  for (std::size_t k = 0; k < instances; ++k) {
    Rng rng(trial_seed(seed, k));
    const std::size_t n = 1 + uniform_index(rng, max_n);
    const std::size_t size = n + 1 + uniform_index(rng, 6);
    TrialKind kind = mix.draw(rng);
    const PointConfig x = draw_or_fall_back(field, n, size, kind, rng);
    const BettiAnalysis a = analyze_betti(x);
    if (!check_structure(a).all()) ++rep.structural_failures;
    std::optional<std::size_t> via_socle;
    try {
      via_socle = isoc_via_socle(x);
    } catch (const FieldTooSmall&) {
      ++rep.skipped_no_form;
      continue;
    }
    ++rep.compared;
    if (!via_socle || *via_socle != isoc_from_table(a.table, n)) ++rep.mismatches;
  }
  return rep;
}

MonotonicityReport run_monotonicity(std::size_t pairs, Word p, std::uint64_t seed) {
  const PrimeField field(p);
  MonotonicityReport rep;
  for (std::size_t k = 0; rep.pairs < pairs && k < 20 * pairs; ++k) {
    Rng rng(trial_seed(seed, k));
    const std::size_t n = 2 + uniform_index(rng, 3);
    const std::size_t size = n + 2 + uniform_index(rng, 5);
    const TrialKind kind = rng() % 2 == 0 ? TrialKind::Planted : TrialKind::Collinear;
    const PointConfig big = draw_instance(field, n, size, kind, rng);
    const BettiAnalysis a = analyze_betti(big);
    if (!check_structure(a).all()) ++rep.structural_failures;
    if (isoc_from_table(a.table, n) != 1) continue;

    // Random nondegenerate subset, at least n + 1 points.
    std::optional<PointConfig> small;
    for (int attempt = 0; attempt < 50 && !small; ++attempt) {
      std::vector<std::size_t> idx(big.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(n + 1 + uniform_index(rng, big.size() - n));
      std::sort(idx.begin(), idx.end());
      PointConfig candidate = big.subset(idx);
      if (is_nondegenerate(candidate)) small = std::move(candidate);
    }
    if (!small) continue;
    const BettiAnalysis b = analyze_betti(*small);
    if (!check_structure(b).all()) ++rep.structural_failures;
    ++rep.pairs;
    if (isoc_from_table(b.table, n) != 1) ++rep.violations;
  }
  return rep;
}

}  // namespace betticover
