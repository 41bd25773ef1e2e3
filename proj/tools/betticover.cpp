// betticover: Betti tables, two-plane covers and verification campaigns for
// point sets in P^n over F_p.

#include "betticover/betti_koszul.hpp"
#include "betticover/graded_ring.hpp"
#include "betticover/harness.hpp"
#include "betticover/matroid.hpp"
#include "betticover/stanley_reisner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace betticover;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PointConfig load_points(const std::string& path) { return parse_config(slurp(path)); }

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(static_cast<T>(std::stoull(item)));
    } catch (const std::logic_error&) {
      throw UsageError("bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

void write_report(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

BettiTable clipped(const BettiTable& t, std::optional<std::size_t> max_i, std::optional<std::size_t> max_j) {
  BettiTable out(t.num_vars(), max_j ? std::min(*max_j, t.max_degree()) : t.max_degree());
  for (const auto& [key, v] : t.entries()) {
    if (max_i && key.first > *max_i) continue;
    if (max_j && key.second > *max_j) continue;
    out.set(key.first, key.second, v);
  }
  return out;
}

struct BettiOpts {
  std::string input;
  std::optional<std::size_t> max_i;
  std::optional<std::size_t> max_j;
};

int cmd_betti(const BettiOpts& o, bool json) {
  const PointConfig x = load_points(o.input);
  const std::size_t n = x.dim();
  const bool nondegenerate = is_nondegenerate(x);
  const BettiAnalysis a = analyze_betti(x);
  const BettiTable t = clipped(a.table, o.max_i, o.max_j);
  if (!nondegenerate) std::cerr << "warning: configuration is degenerate; main predicate not evaluated\n";
  if (json) {
    nlohmann::json j = to_json(t);
    j["n"] = n;
    j["p"] = x.field().modulus();
    j["points"] = x.size();
    j["regularity"] = a.regularity;
    j["nondegenerate"] = nondegenerate;
    j["beta_n_n1"] = a.table(n, n + 1);
    if (nondegenerate) j["main_predicate"] = a.table(n, n + 1) != 0;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << render(t, std::make_pair(n, n + 1));
  std::cout << "beta_{" << n << "," << n + 1 << "} = " << a.table(n, n + 1);
  if (nondegenerate) std::cout << (a.table(n, n + 1) != 0 ? "  (nonzero: X is D_n)" : "  (zero: X is not D_n)");
  std::cout << "\n";
  return kOk;
}

struct CoverOpts {
  std::string input;
  std::optional<std::size_t> t;
};

int cmd_cover(const CoverOpts& o, bool json) {
  const PointConfig x = load_points(o.input);
  if (x.size() < 2) throw UsageError("cover needs at least two points");
  const std::size_t n = x.dim();
  const std::size_t t = o.t.value_or(n);
  if (t < 1) throw UsageError("--t must be positive");
  const Matroid m = Matroid::from_points(x);
  const auto cert = is_Dt(m, t);
  if (!cert) {
    if (json) {
      std::cout << nlohmann::json{{"t", t}, {"cover", false}}.dump(2) << "\n";
    } else {
      std::cout << "no cover: X is not D_" << t << "\n";
    }
    return kNegative;
  }
  const NormalizedCover nc = normalize_cover(m, *cert, t);
  const bool check_disjoint = is_nondegenerate(x) && t == n;
  if (json) {
    nlohmann::json j = to_json(*cert, m);
    j["t"] = t;
    j["cover"] = true;
    j["normalized_a"] = nc.a;
    j["normalized_b"] = nc.b;
    if (check_disjoint) j["disjoint"] = nc.disjoint;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cover found: X is D_" << t << "\n";
    std::cout << "  part 1: " << to_string(cert->part1) << "  spans a " << cert->r1 - 1 << "-plane\n";
    std::cout << "  part 2: " << to_string(cert->part2) << "  spans a " << cert->r2 - 1 << "-plane\n";
    std::cout << "  normalized: a = " << nc.a << ", b = " << nc.b << "\n";
    auto show = [](const char* name, const std::optional<Matrix>& b) {
      if (!b) return;
      std::cout << "  " << name << ":";
      for (Index r = 0; r < b->rows(); ++r) {
        std::cout << " (";
        const auto row = b->row(r);
        for (std::size_t k = 0; k < row.size(); ++k) std::cout << (k ? "," : "") << row[k];
        std::cout << ")";
      }
      std::cout << "\n";
    };
    show("basis 1", cert->basis1);
    show("basis 2", cert->basis2);
    if (check_disjoint) std::cout << "  disjoint spans: " << (nc.disjoint ? "verified" : "FAILED") << "\n";
  }
  return check_disjoint && !nc.disjoint ? kNegative : kOk;
}

int cmd_isoc(const std::string& input, bool json) {
  const PointConfig x = load_points(input);
  if (!is_nondegenerate(x)) throw UsageError("isoc needs a nondegenerate configuration");
  const std::size_t via_betti = isoc_via_betti(x);
  std::optional<LinearForm> form;
  std::optional<std::size_t> via_socle;
  try {
    form = find_nzd_linear_form(x);
    via_socle = isoc_via_socle(x, *form);
  } catch (const FieldTooSmall&) {
  }
  const bool agree = !form || via_socle == via_betti;
  if (json) {
    nlohmann::json j = {{"isoc_betti", via_betti}, {"agree", agree}};
    if (form) {
      j["form"] = form->coeffs;
      j["isoc_socle"] = via_socle ? nlohmann::json(*via_socle) : nlohmann::json();
    } else {
      j["note"] = "socle oracle unavailable: field too small";
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "isoc via Betti numbers: " << via_betti << "\n";
    if (form) {
      std::cout << "isoc via socle: " << (via_socle ? std::to_string(*via_socle) : "none") << "  (form "
                << form->to_string() << ")\n";
      if (!agree) std::cout << "MISMATCH between the two computations\n";
    } else {
      std::cout << "socle oracle unavailable: field too small\n";
    }
  }
  return agree ? kOk : kNegative;
}

struct MainOpts {
  std::string dims = "2,3,4";
  std::string primes = "101,32003";
  std::string sizes = "1..6";
  std::size_t trials = 500;
  std::string mix = "default";
  std::string report;
  std::string repro_dir = ".";
};

int cmd_verify_main(const MainOpts& o, std::uint64_t seed, bool json) {
  MainCampaign c;
  c.dims = parse_list<std::size_t>(o.dims);
  c.primes = parse_list<Word>(o.primes);
  for (auto p : c.primes) {
    if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
  }
  for (auto n : c.dims) {
    if (n < 1) throw UsageError("--n entries must be positive");
  }
  std::tie(c.size_lo, c.size_hi) = parse_range(o.sizes);
  if (c.size_lo < 1) throw UsageError("--sizes must start at 1 or more (sizes are offsets from n)");
  c.trials = o.trials;
  c.seed = seed;
  c.mix = TrialMix::parse(o.mix);
  if (!o.repro_dir.empty()) c.repro_dir = o.repro_dir;

  const MainReport r = run_verify_main(c);
  const nlohmann::json j = to_json(r);
  if (!o.report.empty()) write_report(o.report, j);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "trials: " << r.records.size() << "  agreements: " << r.agreements
              << "  disagreements: " << r.disagreements << "  skipped: " << r.skipped << "\n";
    std::cout << "isoc mismatches: " << r.isoc_mismatches << "  (socle unavailable: " << r.socle_unavailable << ")\n";
    std::cout << "structural failures: " << r.structural_failures << "  non-disjoint covers: " << r.cover_not_disjoint
              << "\n";
    std::cout << "elapsed: " << r.elapsed_seconds << " s\n";
    for (const auto& t : r.records) {
      if (t.repro_file) std::cout << "repro: " << t.repro_file->string() << "\n";
    }
  }
  return r.ok() ? kOk : kNegative;
}

struct MatroidOpts {
  std::string dims = "1,2,3,4";
  std::string primes = "101,32003";
  std::size_t elements = 10;
  bool concurrent = false;
  std::size_t trials = 300;
  std::string report;
};

int cmd_verify_matroid(const MatroidOpts& o, std::uint64_t seed, bool json) {
  MatroidCampaign c;
  c.dims = parse_list<std::size_t>(o.dims);
  c.primes = parse_list<Word>(o.primes);
  for (auto p : c.primes) {
    if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
  }
  for (auto n : c.dims) {
    if (n < 1) throw UsageError("--n entries must be positive");
  }
  if (o.elements > 20) throw UsageError("--elements is limited to 20");
  c.max_elements = o.elements;
  c.trials = o.trials;
  c.seed = seed;
  c.concurrent = o.concurrent;
  const MatroidReport r = run_verify_matroid(c);
  const nlohmann::json j = to_json(r);
  if (!o.report.empty()) write_report(o.report, j);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instances: " << r.records.size() << "\n";
    std::cout << "  hypothesis_fails:   " << r.hypothesis_fails << "\n";
    std::cout << "  conclusion_uniform: " << r.conclusion_uniform << "\n";
    std::cout << "  COUNTEREXAMPLE:     " << r.counterexamples << "\n";
    std::cout << "moment-curve instances not uniform: " << r.moment_not_uniform << " of " << r.moment_instances << "\n";
    std::cout << "elapsed: " << r.elapsed_seconds << " s\n";
  }
  return r.ok() ? kOk : kNegative;
}

struct HochsterOpts {
  std::optional<std::size_t> cycle;
  std::string complex_path;
  Word p = 101;
};

int cmd_hochster(const HochsterOpts& o, bool json) {
  if (!is_prime(o.p)) throw UsageError(std::to_string(o.p) + " is not prime");
  const PrimeField field(o.p);
  if (o.cycle.has_value() == !o.complex_path.empty()) throw UsageError("give exactly one of --cycle and --complex");
  std::optional<SimplicialComplex> c;
  if (o.cycle) {
    if (*o.cycle < 3) throw UsageError("--cycle needs at least 3 vertices");
    if (*o.cycle > 10) throw UsageError("--cycle is limited to 10 vertices");
    c = cycle_complex(*o.cycle);
  } else {
    try {
      c = complex_from_json(nlohmann::json::parse(slurp(o.complex_path)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what());
    }
  }
  const BettiTable h = hochster_table(*c, field);
  const KoszulBetti k = sr_koszul_betti(*c, field);
  const bool agree = h == k.table;
  const std::size_t m = c->num_vertices();

  std::optional<bool> section_agree;
  if (o.cycle && m >= 3) section_agree = betti_table(cycle_section_points(m - 2, field)) == k.table;

  if (json) {
    nlohmann::json j = {{"vertices", m},          {"hochster", to_json(h)},        {"koszul", to_json(k.table)},
                        {"agree", agree},         {"d_squared_zero", k.d_squared_zero}};
    if (section_agree) {
      const std::size_t n = m - 2;
      j["n"] = n;
      j["beta_n_n1"] = h(n, n + 1);
      j["beta_n_n2"] = h(n, n + 2);
      j["section_points_agree"] = *section_agree;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Hochster formula:\n" << render(h) << "\nKoszul homology:\n" << render(k.table);
    std::cout << "tables agree: " << (agree ? "yes" : "NO") << "\n";
    if (section_agree) {
      const std::size_t n = m - 2;
      std::cout << "beta_{" << n << "," << n + 1 << "} = " << h(n, n + 1) << ", beta_{" << n << "," << n + 2
                << "} = " << h(n, n + 2) << "\n";
      std::cout << "hyperplane-section points agree: " << (*section_agree ? "yes" : "NO") << "\n";
    }
  }
  return agree && section_agree.value_or(true) && k.d_squared_zero ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded Betti numbers and two-plane covers of point sets over F_p"};
  app.require_subcommand(1);
  bool json = false;
  std::uint64_t seed = 1;
  app.add_flag("--json", json, "Machine-readable output");
  app.add_option("--seed", seed, "Seed for randomized commands");

  BettiOpts betti;
  auto* s_betti = app.add_subcommand("betti", "Betti table of S/I(X)");
  s_betti->add_option("input", betti.input, "Point file")->required();
  s_betti->add_option("--max-i", betti.max_i, "Largest homological index shown");
  s_betti->add_option("--max-j", betti.max_j, "Largest internal degree shown");

  CoverOpts cover;
  auto* s_cover = app.add_subcommand("cover", "Search for a cover by two planes with a + b < t");
  s_cover->add_option("input", cover.input, "Point file")->required();
  s_cover->add_option("--t", cover.t, "Bound t (default n)");

  std::string isoc_input;
  auto* s_isoc = app.add_subcommand("isoc", "Initial socle degree, two ways");
  s_isoc->add_option("input", isoc_input, "Point file")->required();

  MainOpts vmain;
  auto* s_main = app.add_subcommand("verify-main", "Randomized check of beta_{n,n+1} != 0 against D_n covers");
  s_main->add_option("--n", vmain.dims, "Comma-separated dimensions")->capture_default_str();
  s_main->add_option("--p", vmain.primes, "Comma-separated primes")->capture_default_str();
  s_main->add_option("--sizes", vmain.sizes, "Sizes as offsets from n, lo..hi")->capture_default_str();
  s_main->add_option("--trials", vmain.trials, "Trials per (n, p)")->capture_default_str();
  s_main->add_option("--mix", vmain.mix, "default, <kind>-only or kind=weight,...")->capture_default_str();
  s_main->add_option("--json-report", vmain.report, "Write the JSON report here");
  s_main->add_option("--repro-dir", vmain.repro_dir, "Directory for repro files")->capture_default_str();

  MatroidOpts vmat;
  auto* s_mat = app.add_subcommand("verify-matroid", "Randomized check of the matroid deletion statement");
  s_mat->add_option("--n", vmat.dims, "Comma-separated n (rank n + 1)")->capture_default_str();
  s_mat->add_option("--p", vmat.primes, "Comma-separated primes")->capture_default_str();
  s_mat->add_option("--elements", vmat.elements, "Largest ground set")->capture_default_str();
  s_mat->add_option("--trials", vmat.trials, "Random linear matroids")->capture_default_str();
  s_mat->add_option("--json-report", vmat.report, "Write the JSON report here");
  s_mat->add_flag("--concurrent", vmat.concurrent, "Add two points on each of n concurrent lines (n = 3, 4)");

  HochsterOpts hoch;
  auto* s_hoch = app.add_subcommand("hochster", "Stanley-Reisner Betti table from Hochster's formula and Koszul homology");
  s_hoch->add_option("--cycle", hoch.cycle, "Cycle on m vertices");
  s_hoch->add_option("--complex", hoch.complex_path, "Complex JSON file");
  s_hoch->add_option("--p", hoch.p, "Prime")->capture_default_str();

  for (auto* s : {s_betti, s_cover, s_isoc, s_main, s_mat, s_hoch}) {
    s->add_flag("--json", json, "Machine-readable output");
    s->add_option("--seed", seed, "Seed for randomized commands");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*s_betti) return cmd_betti(betti, json);
    if (*s_cover) return cmd_cover(cover, json);
    if (*s_isoc) return cmd_isoc(isoc_input, json);
    if (*s_main) return cmd_verify_main(vmain, seed, json);
    if (*s_mat) return cmd_verify_matroid(vmat, seed, json);
    if (*s_hoch) return cmd_hochster(hoch, json);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
