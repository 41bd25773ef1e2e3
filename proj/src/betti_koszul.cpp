#include "betticover/betti_koszul.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace betticover {

namespace {

std::vector<std::uint32_t> subsets_of_size(std::size_t nvars, std::size_t k) {
  std::vector<std::uint32_t> out;
  if (k > nvars) return out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << nvars); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) == k) out.push_back(mask);
  }
  return out;
}

}  // namespace

std::size_t BettiTable::operator()(std::size_t i, std::size_t j) const {
  const auto it = entries_.find({i, j});
  return it == entries_.end() ? 0 : it->second;
}

void BettiTable::set(std::size_t i, std::size_t j, std::size_t value) {
  if (value == 0) {
    entries_.erase({i, j});
  } else {
    entries_[{i, j}] = value;
  }
  max_degree_ = std::max(max_degree_, j);
}

std::string render(const BettiTable& t, std::optional<std::pair<std::size_t, std::size_t>> highlight) {
  std::size_t max_row = 0;
  for (const auto& [key, v] : t.entries()) max_row = std::max(max_row, key.second - key.first);
  if (highlight && highlight->second >= highlight->first) {
    max_row = std::max(max_row, highlight->second - highlight->first);
  }
  const std::size_t cols = t.num_vars() + 1;
  auto cell = [&](std::size_t i, std::size_t j) {
    const auto v = t(i, j);
    std::string s = v == 0 ? "." : std::to_string(v);
    if (highlight && highlight->first == i && highlight->second == j) s = "[" + s + "]";
    return s;
  };
  std::ostringstream out;
  out << std::setw(7) << "";
  for (std::size_t i = 0; i < cols; ++i) out << std::setw(6) << i;
  out << "\n" << std::setw(7) << "total:";
  for (std::size_t i = 0; i < cols; ++i) {
    std::size_t sum = 0;
    for (const auto& [key, v] : t.entries()) {
      if (key.first == i) sum += v;
    }
    out << std::setw(6) << sum;
  }
  out << "\n";
  for (std::size_t r = 0; r <= max_row; ++r) {
    out << std::setw(6) << r << ":";
    for (std::size_t i = 0; i < cols; ++i) out << std::setw(6) << cell(i, i + r);
    out << "\n";
  }
  return out.str();
}

nlohmann::json to_json(const BettiTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, v] : t.entries()) rows.push_back({{"i", key.first}, {"j", key.second}, {"value", v}});
  return {{"num_vars", t.num_vars()}, {"max_degree", t.max_degree()}, {"betti", rows}};
}

BettiTable betti_table_from_json(const nlohmann::json& j) {
  BettiTable t(j.value("num_vars", std::size_t{0}), j.value("max_degree", std::size_t{0}));
  for (const auto& e : j.at("betti")) {
    t.set(e.at("i").get<std::size_t>(), e.at("j").get<std::size_t>(), e.at("value").get<std::size_t>());
  }
  return t;
}

KoszulSlice koszul_slice(const QuotientSlices& q, std::size_t i, std::size_t j) {
  const std::size_t nvars = q.num_vars;
  if (nvars > 31) throw std::invalid_argument("too many variables for the Koszul engine");
  KoszulSlice slice{i, j, {}, SparseMatrix(q.field, 0, 0)};
  if (j < i || i > nvars) return slice;

  const std::size_t d = j - i;
  if (d > q.top_degree()) throw std::invalid_argument("quotient slice of degree " + std::to_string(d) + " missing");
  const std::size_t h = q.dim(d);
  for (auto mask : subsets_of_size(nvars, i)) {
    for (std::size_t mu = 0; mu < h; ++mu) slice.basis.emplace_back(mask, mu);
  }
  const auto cols = static_cast<Index>(slice.basis.size());
  if (i == 0) {
    slice.differential = SparseMatrix(q.field, 0, cols);
    return slice;
  }
  if (d + 1 > q.top_degree() || (h > 0 && q.degrees[d].times.size() != h)) {
    throw std::invalid_argument("quotient slice of degree " + std::to_string(d + 1) + " missing");
  }

  const auto targets = subsets_of_size(nvars, i - 1);
  std::unordered_map<std::uint32_t, std::size_t> target_index;
  for (std::size_t k = 0; k < targets.size(); ++k) target_index.emplace(targets[k], k);
  const std::size_t h_next = q.dim(d + 1);
  const auto& f = q.field;

  slice.differential = SparseMatrix(f, static_cast<Index>(targets.size() * h_next), cols);
  for (Index c = 0; c < cols; ++c) {
    const auto [mask, mu] = slice.basis[static_cast<std::size_t>(c)];
    std::size_t position = 0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1, ++position) {
      const auto t = static_cast<std::size_t>(std::countr_zero(rest));
      const std::size_t base = target_index.at(mask & ~(std::uint32_t{1} << t)) * h_next;
      for (const auto& [row, v] : q.degrees[d].times[mu][t]) {
        slice.differential.add(static_cast<Index>(base + row), c, position % 2 == 0 ? v : f.neg(v));
      }
    }
  }
  return slice;
}

KoszulBetti koszul_betti(const QuotientSlices& q, KoszulWindow window) {
  const std::size_t nvars = q.num_vars;
  KoszulBetti out{BettiTable(nvars, window.max_degree), true, 0};
  for (std::size_t j = 0; j <= window.max_degree; ++j) {
    // Slices for this internal degree, i ascending; rank[i] of d_{i,j}.
    std::vector<std::size_t> dims(nvars + 2, 0);
    std::vector<std::size_t> ranks(nvars + 2, 0);
    std::optional<KoszulSlice> previous;
    for (std::size_t i = 0; i <= std::min(j, nvars); ++i) {
      if (j - i > window.max_row) continue;
      KoszulSlice slice = koszul_slice(q, i, j);
      dims[i] = slice.basis.size();
      ranks[i] = static_cast<std::size_t>(rank(slice.differential));
      if (previous && previous->i + 1 == i && i >= 2) {
        ++out.compositions_checked;
        if (!multiply(previous->differential, slice.differential).is_zero()) out.d_squared_zero = false;
      }
      previous = std::move(slice);
    }
    for (std::size_t i = 0; i <= std::min(j, nvars); ++i) {
      if (j - i > window.max_row) continue;
      out.table.set(i, j, dims[i] - ranks[i] - ranks[i + 1]);
    }
  }
  return out;
}

BettiAnalysis analyze_betti(const PointConfig& x) {
  auto [q, reg] = point_quotient_past_regularity(x, 2);
  const std::size_t nvars = x.dim() + 1;
  const KoszulWindow window{reg + 1, nvars + reg + 1};
  KoszulBetti kb = koszul_betti(q, window);

  BettiAnalysis a;
  a.table = std::move(kb.table);
  a.num_points = x.size();
  a.regularity = reg;
  a.d_squared_zero = kb.d_squared_zero;
  a.compositions_checked = kb.compositions_checked;
  for (std::size_t d = 0; d <= window.max_degree; ++d) a.hilbert.push_back(d <= q.top_degree() ? q.dim(d) : x.size());
  return a;
}

BettiTable betti_table(const PointConfig& x) { return analyze_betti(x).table; }

std::size_t betti_number(const PointConfig& x, std::size_t i, std::size_t j) {
  const std::size_t nvars = x.dim() + 1;
  if (i > nvars) throw std::invalid_argument("homological index exceeds n + 1");
  if (j < i) return 0;
  const QuotientSlices q = point_quotient(x, j - i + 1);
  const KoszulSlice here = koszul_slice(q, i, j);
  const KoszulSlice above = koszul_slice(q, i + 1, j);
  return here.basis.size() - static_cast<std::size_t>(rank(here.differential)) -
         static_cast<std::size_t>(rank(above.differential));
}

bool main_predicate(const PointConfig& x) {
  if (!is_nondegenerate(x)) throw std::invalid_argument("main predicate needs a nondegenerate configuration");
  return betti_number(x, x.dim(), x.dim() + 1) != 0;
}

std::size_t isoc_from_table(const BettiTable& t, std::size_t n) {
  for (std::size_t r = 1; n + r <= t.max_degree(); ++r) {
    if (t(n, n + r) != 0) return r;
  }
  throw std::logic_error("no nonzero beta_{n,n+r} inside the computed window");
}

std::size_t isoc_via_betti(const PointConfig& x) {
  if (!is_nondegenerate(x)) throw std::invalid_argument("isoc needs a nondegenerate configuration");
  return isoc_from_table(betti_table(x), x.dim());
}

std::string StructuralChecks::failures() const {
  std::string out;
  auto note = [&](bool ok, const char* what) {
    if (!ok) out += (out.empty() ? "" : ", ") + std::string(what);
  };
  note(hilbert_series, "hilbert-series");
  note(top_vanishes, "top-vanishes");
  note(beta00, "beta00");
  note(d_squared_zero, "d-squared");
  note(guard_row_zero, "guard-row");
  note(projective_dimension, "pd");
  return out;
}

bool hilbert_series_identity(const BettiTable& t, const std::vector<std::size_t>& hilbert) {
  const std::size_t nvars = t.num_vars();
  // (1 - t)^nvars coefficients.
  std::vector<long long> kernel(nvars + 1);
  for (std::size_t k = 0; k <= nvars; ++k) {
    kernel[k] = static_cast<long long>(binomial(nvars, k)) * (k % 2 == 0 ? 1 : -1);
  }
  for (std::size_t j = 0; j < hilbert.size(); ++j) {
    long long expected = 0;
    for (std::size_t k = 0; k <= std::min(j, nvars); ++k) expected += kernel[k] * static_cast<long long>(hilbert[j - k]);
    long long alternating = 0;
    for (std::size_t i = 0; i <= nvars; ++i) {
      alternating += (i % 2 == 0 ? 1 : -1) * static_cast<long long>(t(i, j));
    }
    if (expected != alternating) return false;
  }
  return true;
}

StructuralChecks check_structure(const BettiAnalysis& a) {
  StructuralChecks c;
  const std::size_t nvars = a.table.num_vars();
  const std::size_t n = nvars - 1;
  c.hilbert_series = hilbert_series_identity(a.table, a.hilbert);
  c.d_squared_zero = a.d_squared_zero;
  bool top_nonzero = false;
  bool n_nonzero = false;
  for (const auto& [key, v] : a.table.entries()) {
    if (key.first == nvars) top_nonzero = true;
    if (key.first == n) n_nonzero = true;
    if (key.second - key.first == a.regularity + 1) c.guard_row_zero = false;
    if (key.second < key.first) c.guard_row_zero = false;
    if (key.first == 0 && key.second > 0) c.beta00 = false;
  }
  c.top_vanishes = !top_nonzero;
  if (a.num_points > 0) {
    c.beta00 = c.beta00 && a.table(0, 0) == 1;
    c.projective_dimension = n_nonzero && !top_nonzero;
  }
  return c;
}

}  // namespace betticover
