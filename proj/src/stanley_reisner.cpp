#include "betticover/stanley_reisner.hpp"

#include "betticover/matroid.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace betticover {

namespace {

std::vector<std::uint32_t> maximal_only(std::vector<std::uint32_t> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::uint32_t> out;
  for (auto s : sets) {
    const bool dominated =
        std::any_of(sets.begin(), sets.end(), [s](std::uint32_t t) { return t != s && (s & ~t) == 0; });
    if (!dominated) out.push_back(s);
  }
  return out;
}

// Exponent vectors of degree d with support exactly `face`.
void monomials_on_face(std::uint32_t face, std::size_t nvars, unsigned d, std::vector<Monomial>& out) {
  std::vector<std::size_t> vars;
  for (auto b = face; b != 0; b &= b - 1) vars.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  if (vars.empty()) {
    if (d == 0) out.push_back(Monomial{std::vector<unsigned>(nvars, 0)});
    return;
  }
  if (d < vars.size()) return;
  std::vector<unsigned> exps(nvars, 0);
  // Distribute d - |face| extra units over the support.
  auto rec = [&](auto&& self, std::size_t k, unsigned remaining) -> void {
    if (k + 1 == vars.size()) {
      exps[vars[k]] = remaining + 1;
      out.push_back(Monomial{exps});
      return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
      exps[vars[k]] = e + 1;
      self(self, k + 1, remaining - e);
    }
  };
  rec(rec, 0, d - static_cast<unsigned>(vars.size()));
}

std::uint32_t support(const Monomial& m) {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) {
    if (m.exponents[i] != 0) s |= std::uint32_t{1} << i;
  }
  return s;
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::size_t vertices, const std::vector<std::vector<std::size_t>>& facets)
    : vertices_(vertices) {
  if (vertices > kMaxVertices) throw std::invalid_argument("simplicial complexes are limited to 16 vertices");
  std::vector<std::uint32_t> masks;
  for (const auto& f : facets) {
    std::uint32_t mask = 0;
    for (auto v : f) {
      if (v >= vertices) throw std::out_of_range("facet mentions vertex " + std::to_string(v));
      mask |= std::uint32_t{1} << v;
    }
    masks.push_back(mask);
  }
  facets_ = maximal_only(std::move(masks));
}

SimplicialComplex::SimplicialComplex(std::size_t vertices, std::vector<std::uint32_t> facet_masks)
    : vertices_(vertices) {
  if (vertices > kMaxVertices) throw std::invalid_argument("simplicial complexes are limited to 16 vertices");
  for (auto m : facet_masks) {
    if (m >> vertices) throw std::out_of_range("facet outside the vertex set");
  }
  facets_ = maximal_only(std::move(facet_masks));
}

bool SimplicialComplex::is_face(std::uint32_t mask) const {
  return std::any_of(facets_.begin(), facets_.end(), [mask](std::uint32_t f) { return (mask & ~f) == 0; });
}

int SimplicialComplex::dimension() const {
  if (facets_.empty()) return -2;
  int best = -1;
  for (auto f : facets_) best = std::max(best, std::popcount(f) - 1);
  return best;
}

SimplicialComplex SimplicialComplex::induced(std::uint32_t w) const {
  std::vector<std::uint32_t> restricted;
  for (auto f : facets_) restricted.push_back(f & w);
  return SimplicialComplex(vertices_, std::move(restricted));
}

std::vector<std::vector<std::uint32_t>> SimplicialComplex::faces_by_size() const {
  std::set<std::uint32_t> faces;
  for (auto f : facets_) {
    // Every submask of f, including f and 0.
    for (std::uint32_t s = f;; s = (s - 1) & f) {
      faces.insert(s);
      if (s == 0) break;
    }
  }
  std::vector<std::vector<std::uint32_t>> out;
  if (faces.empty()) return out;
  out.resize(static_cast<std::size_t>(dimension() + 2));
  for (auto s : faces) out[static_cast<std::size_t>(std::popcount(s))].push_back(s);
  return out;
}

SimplicialComplex cycle_complex(std::size_t m) {
  if (m < 3) throw std::invalid_argument("a cycle needs at least 3 vertices");
  std::vector<std::vector<std::size_t>> facets;
  for (std::size_t i = 0; i < m; ++i) facets.push_back({i, (i + 1) % m});
  return SimplicialComplex(m, facets);
}

SimplicialComplex full_simplex(std::size_t m) {
  return SimplicialComplex(m, std::vector<std::uint32_t>{(std::uint32_t{1} << m) - 1});
}

SimplicialComplex complex_from_json(const nlohmann::json& j) {
  try {
    return SimplicialComplex(j.at("vertices").get<std::size_t>(),
                             j.at("facets").get<std::vector<std::vector<std::size_t>>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed complex JSON: ") + e.what());
  }
}

nlohmann::json to_json(const SimplicialComplex& c) {
  nlohmann::json facets = nlohmann::json::array();
  for (auto f : c.facets()) {
    std::vector<std::size_t> verts;
    for (auto b = f; b != 0; b &= b - 1) verts.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    facets.push_back(verts);
  }
  return {{"vertices", c.num_vertices()}, {"facets", facets}};
}

std::vector<std::size_t> reduced_homology_dims(const SimplicialComplex& c, const PrimeField& field) {
  const auto faces = c.faces_by_size();
  if (faces.empty()) return {};
  // boundary_rank[k] = rank of the boundary from size-k faces to size-(k-1) faces.
  std::vector<std::size_t> boundary_rank(faces.size() + 1, 0);
  for (std::size_t k = 1; k < faces.size(); ++k) {
    std::map<std::uint32_t, Index> lower;
    for (std::size_t r = 0; r < faces[k - 1].size(); ++r) lower.emplace(faces[k - 1][r], static_cast<Index>(r));
    SparseMatrix boundary(field, static_cast<Index>(faces[k - 1].size()), static_cast<Index>(faces[k].size()));
    for (std::size_t col = 0; col < faces[k].size(); ++col) {
      const auto face = faces[k][col];
      std::size_t position = 0;
      for (auto b = face; b != 0; b &= b - 1, ++position) {
        const auto v = static_cast<std::uint32_t>(std::countr_zero(b));
        const Word sign = position % 2 == 0 ? 1 : field.neg(1);
        boundary.add(lower.at(face & ~(std::uint32_t{1} << v)), static_cast<Index>(col), sign);
      }
    }
    boundary_rank[k] = static_cast<std::size_t>(rank(boundary));
  }
  std::vector<std::size_t> dims(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) dims[k] = faces[k].size() - boundary_rank[k] - boundary_rank[k + 1];
  return dims;
}

std::size_t reduced_homology(const std::vector<std::size_t>& dims, int q) {
  if (q < -1) return 0;
  const auto k = static_cast<std::size_t>(q + 1);
  return k < dims.size() ? dims[k] : 0;
}

std::size_t hochster_betti(const SimplicialComplex& c, const PrimeField& field, std::size_t i, std::size_t j) {
  const std::size_t m = c.num_vertices();
  if (j > m) return 0;
  std::size_t total = 0;
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << m); ++w) {
    if (static_cast<std::size_t>(std::popcount(w)) != j) continue;
    const auto dims = reduced_homology_dims(c.induced(w), field);
    total += reduced_homology(dims, static_cast<int>(j) - static_cast<int>(i) - 1);
  }
  return total;
}

BettiTable hochster_table(const SimplicialComplex& c, const PrimeField& field) {
  const std::size_t m = c.num_vertices();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sums;
  for (std::uint32_t w = 0; w < (std::uint32_t{1} << m); ++w) {
    const auto j = static_cast<std::size_t>(std::popcount(w));
    const auto dims = reduced_homology_dims(c.induced(w), field);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      // k = q + 1 and i = j - q - 1 = j - k.
      if (dims[k] == 0 || k > j) continue;
      sums[{j - k, j}] += dims[k];
    }
  }
  BettiTable t(m, m);
  for (const auto& [key, v] : sums) t.set(key.first, key.second, v);
  return t;
}

QuotientSlices stanley_reisner_quotient(const SimplicialComplex& c, const PrimeField& field, std::size_t top) {
  const std::size_t m = c.num_vertices();
  QuotientSlices q{field, m, {}};
  std::vector<std::uint32_t> faces;
  for (const auto& level : c.faces_by_size()) faces.insert(faces.end(), level.begin(), level.end());

  std::vector<std::map<Monomial, std::size_t>> index(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    QuotientBasis basis;
    for (auto f : faces) monomials_on_face(f, m, static_cast<unsigned>(d), basis.standard);
    std::sort(basis.standard.begin(), basis.standard.end(), Monomial::grlex_greater);
    for (std::size_t k = 0; k < basis.standard.size(); ++k) index[d].emplace(basis.standard[k], k);
    q.degrees.push_back(std::move(basis));
  }
  for (std::size_t d = 0; d < top; ++d) {
    auto& basis = q.degrees[d];
    basis.times.assign(basis.standard.size(), std::vector<SparseVector>(m));
    for (std::size_t k = 0; k < basis.standard.size(); ++k) {
      for (std::size_t t = 0; t < m; ++t) {
        const Monomial product = basis.standard[k].times(t);
        if (c.is_face(support(product))) basis.times[k][t] = {{index[d + 1].at(product), Word{1}}};
      }
    }
  }
  return q;
}

KoszulBetti sr_koszul_betti(const SimplicialComplex& c, const PrimeField& field) {
  const std::size_t m = c.num_vertices();
  if (m > 10) throw BudgetExceeded("Stanley-Reisner Koszul computation is limited to 10 vertices");
  const QuotientSlices q = stanley_reisner_quotient(c, field, m);
  // Squarefree modules have beta_{i,j} = 0 for j > m.
  return koszul_betti(q, KoszulWindow{m, m});
}

BettiTable sr_betti_via_koszul(const SimplicialComplex& c, const PrimeField& field) {
  return sr_koszul_betti(c, field).table;
}

std::vector<std::size_t> stanley_reisner_hilbert(const SimplicialComplex& c, std::size_t top) {
  std::vector<std::size_t> hf(top + 1, 0);
  for (const auto& level : c.faces_by_size()) {
    for (auto f : level) {
      const auto k = static_cast<std::size_t>(std::popcount(f));
      // Monomials of degree d with support exactly f: C(d - 1, k - 1).
      for (std::size_t d = 0; d <= top; ++d) {
        if (k == 0) {
          hf[d] += d == 0 ? 1 : 0;
        } else if (d >= k) {
          hf[d] += binomial(d - 1, k - 1);
        }
      }
    }
  }
  return hf;
}

std::vector<std::vector<Word>> cyclic_differences(std::size_t s, const PrimeField& field) {
  std::vector<std::vector<Word>> out(s, std::vector<Word>(s, 0));
  for (std::size_t i = 0; i < s; ++i) {
    out[i][i] = field.add(out[i][i], 1);
    out[i][(i + 1) % s] = field.sub(out[i][(i + 1) % s], 1);
  }
  return out;
}

bool is_circuit_family(const std::vector<std::vector<Word>>& vectors, const PrimeField& field) {
  const std::size_t s = vectors.size();
  if (s == 0) return false;
  if (rank_of_vectors(vectors, field) != static_cast<Index>(s - 1)) return false;
  for (std::size_t skip = 0; skip < s; ++skip) {
    std::vector<std::vector<Word>> rest;
    for (std::size_t k = 0; k < s; ++k) {
      if (k != skip) rest.push_back(vectors[k]);
    }
    if (rank_of_vectors(rest, field) != static_cast<Index>(s - 1)) return false;
  }
  return true;
}

bool cyclic_differences_form_circuit(std::size_t s, const PrimeField& field) {
  if (s < 2) throw std::invalid_argument("need at least two vectors");
  return is_circuit_family(cyclic_differences(s, field), field);
}

PointConfig cycle_section_points(std::size_t n, const PrimeField& field) {
  const std::size_t ambient = n + 2;
  const auto vectors = cyclic_differences(ambient, field);
  // Columns f_1..f_{n+1}, then the target vector, solved by one RREF each.
  std::vector<std::vector<Word>> coords;
  for (const auto& v : vectors) {
    Matrix system(field, static_cast<Index>(ambient), static_cast<Index>(n + 2));
    for (std::size_t k = 1; k <= n + 1; ++k) {
      system.entries()(static_cast<Index>(k - 1), static_cast<Index>(k - 1)) = 1;
      system.entries()(static_cast<Index>(k), static_cast<Index>(k - 1)) = field.neg(1);
    }
    for (std::size_t r = 0; r < ambient; ++r) system.entries()(static_cast<Index>(r), static_cast<Index>(n + 1)) = v[r];
    const auto rr = rref(system);
    if (rr.rank != static_cast<Index>(n + 1) || rr.pivot_cols.back() != static_cast<Index>(n)) {
      throw std::logic_error("section point outside the hyperplane");
    }
    std::vector<Word> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = rr.reduced(static_cast<Index>(k), static_cast<Index>(n + 1));
    coords.push_back(std::move(c));
  }
  std::vector<ProjPoint> pts;
  for (auto& c : coords) pts.push_back(normalize(field, std::move(c)));
  return PointConfig(field, n, std::move(pts));
}

}  // namespace betticover
