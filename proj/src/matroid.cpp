#include "betticover/matroid.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace betticover {

namespace {

Matrix select_rows(const Matrix& vectors, ElementSet s) {
  Matrix sub(vectors.field(), static_cast<Index>(s.size()), vectors.cols());
  Index r = 0;
  for (auto x : s.elements()) sub.entries().row(r++) = vectors.entries().row(static_cast<Index>(x));
  return sub;
}

// Nonzero rows of the RREF of the selected vectors.
Matrix span_basis(const Matrix& vectors, ElementSet s) {
  const auto rr = rref(select_rows(vectors, s));
  Matrix basis(vectors.field(), rr.rank, vectors.cols());
  for (Index r = 0; r < rr.rank; ++r) basis.entries().row(r) = rr.reduced.entries().row(r);
  return basis;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  DenseStorage s(a.rows() + b.rows(), a.cols());
  s << a.entries(), b.entries();
  return Matrix(a.field(), std::move(s));
}

class CoverSearch {
 public:
  CoverSearch(const Matroid& m, std::size_t limit) : m_(m), limit_(limit) {}

  std::optional<std::pair<ElementSet, ElementSet>> run() {
    dfs(0, ElementSet{}, ElementSet{}, 0, 0);
    return best_;
  }

 private:
  std::size_t rank(ElementSet s) {
    if (!m_.is_linear()) return m_.rank(s);
    auto [it, inserted] = cache_.try_emplace(s.bits(), 0);
    if (inserted) it->second = m_.rank(s);
    return it->second;
  }

  void dfs(std::size_t k, ElementSet s1, ElementSet s2, std::size_t r1, std::size_t r2) {
    const std::size_t sum = r1 + r2;
    if (sum > limit_) return;
    if (best_ && sum >= best_sum_) return;
    if (k == m_.size()) {
      if (s1.empty() || s2.empty()) return;
      best_ = std::make_pair(s1, s2);
      best_sum_ = sum;
      return;
    }
    const ElementSet n1 = s1.with(k);
    dfs(k + 1, n1, s2, rank(n1), r2);
    // Swapping sides is a symmetry, so element 0 stays on side 1.
    if (k > 0) {
      const ElementSet n2 = s2.with(k);
      dfs(k + 1, s1, n2, r1, rank(n2));
    }
  }

  const Matroid& m_;
  std::size_t limit_;
  std::optional<std::pair<ElementSet, ElementSet>> best_;
  std::size_t best_sum_ = 0;
  std::unordered_map<std::uint64_t, std::size_t> cache_;
};

}  // namespace

ElementSet::ElementSet(std::initializer_list<std::size_t> elements) {
  for (auto x : elements) bits_ |= std::uint64_t{1} << x;
}

ElementSet ElementSet::from_indices(const std::vector<std::size_t>& elements) {
  ElementSet s;
  for (auto x : elements) {
    if (x >= 64) throw std::out_of_range("element index exceeds 63");
    s = s.with(x);
  }
  return s;
}

std::vector<std::size_t> ElementSet::elements() const {
  std::vector<std::size_t> out;
  for (auto b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

std::string to_string(ElementSet s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (auto x : s.elements()) {
    out << (first ? "" : ",") << x;
    first = false;
  }
  out << "}";
  return out.str();
}

Matroid Matroid::linear(const Matrix& vectors) {
  if (vectors.rows() > 64) throw std::invalid_argument("linear matroids are limited to 64 elements");
  Matroid m;
  m.vectors_ = vectors;
  m.labels_.resize(static_cast<std::size_t>(vectors.rows()));
  for (std::size_t i = 0; i < m.labels_.size(); ++i) m.labels_[i] = i;
  return m;
}

Matroid Matroid::from_points(const PointConfig& x) { return linear(x.coordinate_matrix()); }

Matroid Matroid::from_independent_sets(std::size_t ground, const std::vector<std::vector<std::size_t>>& sets,
                                       AxiomCheck check) {
  if (ground > kMaxExplicit) {
    throw std::invalid_argument("explicit matroids are limited to " + std::to_string(kMaxExplicit) + " elements");
  }
  const std::size_t count = std::size_t{1} << ground;
  std::vector<std::uint8_t> independent(count, 0);
  independent[0] = 1;
  for (const auto& set : sets) {
    for (auto x : set) {
      if (x >= ground) throw std::out_of_range("independent set mentions element " + std::to_string(x));
    }
    independent[ElementSet::from_indices(set).bits()] = 1;
  }
  // Downward closure: walk supersets before subsets.
  for (std::size_t s = count; s-- > 0;) {
    if (!independent[s]) continue;
    for (auto b = s; b != 0; b &= b - 1) independent[s & ~(b & (~b + 1))] = 1;
  }
  Matroid m;
  m.labels_.resize(ground);
  for (std::size_t i = 0; i < ground; ++i) m.labels_[i] = i;
  m.rank_table_.assign(count, 0);
  for (std::size_t s = 1; s < count; ++s) {
    if (independent[s]) {
      m.rank_table_[s] = static_cast<std::uint8_t>(std::popcount(s));
      continue;
    }
    std::uint8_t best = 0;
    for (auto b = s; b != 0; b &= b - 1) best = std::max(best, m.rank_table_[s & ~(b & (~b + 1))]);
    m.rank_table_[s] = best;
  }
  if (check == AxiomCheck::Enforce) {
    Rng rng(0x5eed);
    if (!satisfies_rank_axioms(m, rng)) throw std::invalid_argument("independent sets violate the matroid axioms");
  }
  return m;
}

Matroid Matroid::uniform(std::size_t ground, std::size_t r) {
  std::vector<std::vector<std::size_t>> sets;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ground); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) == std::min(r, ground)) sets.push_back(ElementSet(s).elements());
  }
  return from_independent_sets(ground, sets);
}

std::size_t Matroid::rank(ElementSet s) const {
  if (!s.is_subset_of(ground())) throw std::out_of_range("element set " + to_string(s) + " outside ground set");
  if (vectors_) return s.empty() ? 0 : static_cast<std::size_t>(betticover::rank(select_rows(*vectors_, s)));
  return rank_table_[s.bits()];
}

bool satisfies_rank_axioms(const Matroid& m, Rng& rng, std::size_t samples) {
  const std::size_t n = m.size();
  if (m.rank(ElementSet{}) != 0) return false;
  auto submodular = [&](ElementSet a, ElementSet b) {
    return m.rank(a) + m.rank(b) >= m.rank(a | b) + m.rank(a & b);
  };
  auto local = [&](ElementSet s) {
    const auto r = m.rank(s);
    if (r > s.size()) return false;
    for (auto x : s.elements()) {
      const auto rs = m.rank(s.without(x));
      if (rs > r || r > rs + 1) return false;
    }
    return true;
  };
  if (n <= 8) {
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < count; ++a) {
      if (!local(ElementSet(a))) return false;
      for (std::uint64_t b = 0; b < count; ++b) {
        if (!submodular(ElementSet(a), ElementSet(b))) return false;
      }
    }
    return true;
  }
  std::uniform_int_distribution<std::uint64_t> dist(0, ElementSet::full(n).bits());
  for (std::size_t k = 0; k < samples; ++k) {
    const ElementSet a(dist(rng)), b(dist(rng)), c(dist(rng));
    if (!local(a) || !submodular(a, b) || !submodular(b, c) || !submodular(a, c)) return false;
    if (m.rank(a) > m.rank(a | b)) return false;
  }
  return true;
}

ElementSet closure(const Matroid& m, ElementSet s) {
  const auto r = m.rank(s);
  ElementSet out = s;
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (!s.contains(x) && m.rank(s.with(x)) == r) out = out.with(x);
  }
  return out;
}

std::vector<Circuit> circuits(const Matroid& m, std::size_t max_size) {
  if (m.size() > 20) throw BudgetExceeded("circuit enumeration is limited to 20 elements");
  std::vector<Circuit> out;
  const std::uint64_t count = std::uint64_t{1} << m.size();
  for (std::uint64_t bits = 1; bits < count; ++bits) {
    const ElementSet s(bits);
    if (s.size() > max_size) continue;
    if (m.is_independent(s)) continue;
    const auto elems = s.elements();
    const bool minimal = std::all_of(elems.begin(), elems.end(),
                                     [&](std::size_t x) { return m.is_independent(s.without(x)); });
    if (minimal) out.push_back(Circuit{elems});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Circuit fundamental_circuit(const Matroid& m, ElementSet basis, std::size_t x) {
  if (x >= m.size()) throw std::out_of_range("element out of range");
  if (basis.contains(x)) throw std::invalid_argument("element lies in the basis");
  if (!m.is_independent(basis) || m.rank(basis) != m.rank()) throw std::invalid_argument("not a basis");
  ElementSet c = ElementSet{}.with(x);
  for (auto y : basis.elements()) {
    const ElementSet rest = basis.without(y);
    if (m.rank(rest.with(x)) > m.rank(rest)) c = c.with(y);
  }
  return Circuit{c.elements()};
}

std::optional<CoverCertificate> is_Dt(const Matroid& m, std::size_t t) {
  if (m.size() < 2) throw std::invalid_argument("two-plane covers need at least two elements");
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  CoverSearch search(m, t + 1);
  auto found = search.run();
  if (!found) return std::nullopt;
  CoverCertificate cert;
  cert.part1 = found->first;
  cert.part2 = found->second;
  cert.r1 = m.rank(cert.part1);
  cert.r2 = m.rank(cert.part2);
  if (m.is_linear()) {
    cert.basis1 = span_basis(*m.vectors(), cert.part1);
    cert.basis2 = span_basis(*m.vectors(), cert.part2);
  }
  return cert;
}

Matroid delete_element(const Matroid& m, std::size_t x) {
  if (x >= m.size()) throw std::out_of_range("element out of range");
  Matroid out = m;
  out.labels_.erase(out.labels_.begin() + static_cast<std::ptrdiff_t>(x));
  if (m.vectors_) {
    const auto& v = *m.vectors_;
    DenseStorage s(v.rows() - 1, v.cols());
    Index r = 0;
    for (Index k = 0; k < v.rows(); ++k) {
      if (k != static_cast<Index>(x)) s.row(r++) = v.entries().row(k);
    }
    out.vectors_ = Matrix(v.field(), std::move(s));
    return out;
  }
  const std::size_t count = std::size_t{1} << out.size();
  out.rank_table_.assign(count, 0);
  const std::uint64_t low = (std::uint64_t{1} << x) - 1;
  for (std::uint64_t s = 0; s < count; ++s) {
    const std::uint64_t lifted = (s & low) | ((s & ~low) << 1);
    out.rank_table_[s] = m.rank_table_[lifted];
  }
  return out;
}

bool is_uniform(const Matroid& m, std::size_t r) {
  if (m.size() > 20) throw BudgetExceeded("uniformity check is limited to 20 elements");
  const std::uint64_t count = std::uint64_t{1} << m.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const ElementSet s(bits);
    if (m.rank(s) != std::min(s.size(), r)) return false;
  }
  return true;
}

std::string to_string(DeletionVerdict v) {
  switch (v) {
    case DeletionVerdict::HypothesisFails: return "hypothesis_fails";
    case DeletionVerdict::ConclusionUniform: return "conclusion_uniform";
    case DeletionVerdict::Counterexample: return "COUNTEREXAMPLE";
  }
  return "unknown";
}

DeletionCheck check_deletion_theorem(const Matroid& m, std::size_t n) {
  if (m.rank() != n + 1) {
    throw std::invalid_argument("matroid rank " + std::to_string(m.rank()) + " differs from n+1 = " +
                                std::to_string(n + 1));
  }
  DeletionCheck out{DeletionVerdict::HypothesisFails, {}};
  out.transcript.push_back("|E| = " + std::to_string(m.size()) + ", r(E) = " + std::to_string(n + 1));
  if (auto cert = is_Dt(m, n)) {
    out.transcript.push_back("M is D_" + std::to_string(n) + ": " + to_string(cert->part1) + " / " +
                             to_string(cert->part2) + " ranks " + std::to_string(cert->r1) + "+" +
                             std::to_string(cert->r2));
    return out;
  }
  out.transcript.push_back("M is not D_" + std::to_string(n));
  for (std::size_t x = 0; x < m.size(); ++x) {
    const Matroid d = delete_element(m, x);
    const auto cert = d.size() >= 2 ? is_Dt(d, n) : std::nullopt;
    if (!cert) {
      out.transcript.push_back("M - " + std::to_string(x) + " is not D_" + std::to_string(n));
      return out;
    }
    out.transcript.push_back("M - " + std::to_string(x) + " is D_" + std::to_string(n) + ": " +
                             to_string(cert->part1) + " / " + to_string(cert->part2));
  }
  if (m.size() == n + 2 && is_uniform(m, n + 1)) {
    out.verdict = DeletionVerdict::ConclusionUniform;
    out.transcript.push_back("M = U(n+1, n+2)");
  } else {
    out.verdict = DeletionVerdict::Counterexample;
    out.transcript.push_back("hypothesis holds but M is not U(n+1, n+2)");
  }
  return out;
}

bool verify_circuit_elimination(const Matroid& m, std::size_t budget) {
  if (m.size() > budget) throw BudgetExceeded("circuit enumeration budget exceeded");
  const auto cs = circuits(m, m.size());
  std::vector<ElementSet> sets;
  for (const auto& c : cs) sets.push_back(ElementSet::from_indices(c.elements));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      for (auto x : (sets[i] & sets[j]).elements()) {
        const ElementSet target = (sets[i] | sets[j]).without(x);
        const bool ok = std::any_of(sets.begin(), sets.end(), [&](ElementSet c) { return c.is_subset_of(target); });
        if (!ok) return false;
      }
    }
  }
  return true;
}

NormalizedCover normalize_cover(const Matroid& m, const CoverCertificate& cert, std::size_t t) {
  if (!m.is_linear() || !cert.basis1 || !cert.basis2) {
    throw std::invalid_argument("cover normalization needs a linear matroid");
  }
  const auto& f = m.vectors()->field();
  const Index ambient = m.vectors()->cols();
  Matrix flat1 = *cert.basis1;
  Matrix flat2 = *cert.basis2;
  auto joint_rank = [&] { return static_cast<std::size_t>(rank(vstack(flat1, flat2))); };
  // Grow flat1 by unit vectors outside both spans until the ranks sum to t + 1.
  for (Index k = 0; k < ambient && static_cast<std::size_t>(flat1.rows() + flat2.rows()) < t + 1; ++k) {
    Matrix unit(f, 1, ambient);
    unit.entries()(0, k) = 1;
    const auto before = joint_rank();
    Matrix grown = vstack(flat1, unit);
    if (static_cast<std::size_t>(rank(vstack(grown, flat2))) > before) flat1 = grown;
  }
  NormalizedCover out{static_cast<std::size_t>(flat1.rows()) - 1, static_cast<std::size_t>(flat2.rows()) - 1,
                      flat1, flat2, false};
  out.disjoint = joint_rank() == static_cast<std::size_t>(flat1.rows() + flat2.rows());
  return out;
}

Matroid matroid_from_json(const nlohmann::json& j, AxiomCheck check) {
  try {
    return Matroid::from_independent_sets(j.at("ground").get<std::size_t>(),
                                          j.at("independent_sets").get<std::vector<std::vector<std::size_t>>>(), check);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed matroid JSON: ") + e.what());
  }
}

nlohmann::json to_json(const CoverCertificate& c, const Matroid& m) {
  auto labelled = [&](ElementSet s) {
    std::vector<std::size_t> out;
    for (auto x : s.elements()) out.push_back(m.labels()[x]);
    return out;
  };
  nlohmann::json j = {{"part1", labelled(c.part1)}, {"part2", labelled(c.part2)}, {"r1", c.r1}, {"r2", c.r2},
                      {"a", c.r1 - 1}, {"b", c.r2 - 1}};
  auto rows = [](const Matrix& b) {
    std::vector<std::vector<Word>> out;
    for (Index r = 0; r < b.rows(); ++r) out.push_back(b.row(r));
    return out;
  };
  if (c.basis1) j["basis1"] = rows(*c.basis1);
  if (c.basis2) j["basis2"] = rows(*c.basis2);
  return j;
}

}  // namespace betticover
