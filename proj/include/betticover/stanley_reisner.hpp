#pragma once

#include "betticover/betti_koszul.hpp"
#include "betticover/exact_linalg.hpp"
#include "betticover/graded_ring.hpp"
#include "betticover/matroid.hpp"
#include "betticover/point_config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace betticover {

/// Simplicial complex on vertices 0..m-1 given by its facets (bitmasks).
/// No facets at all is the void complex; a single empty facet is {∅}.
class SimplicialComplex {
 public:
  static constexpr std::size_t kMaxVertices = 16;

  SimplicialComplex(std::size_t vertices, const std::vector<std::vector<std::size_t>>& facets);
  SimplicialComplex(std::size_t vertices, std::vector<std::uint32_t> facet_masks);

  std::size_t num_vertices() const { return vertices_; }
  const std::vector<std::uint32_t>& facets() const { return facets_; }
  bool is_void() const { return facets_.empty(); }
  bool is_face(std::uint32_t mask) const;
  /// Largest face size minus one; -1 for {∅}, -2 for the void complex.
  int dimension() const;

  /// Restriction to the vertex subset `w` (vertices keep their labels).
  SimplicialComplex induced(std::uint32_t w) const;
  /// All faces grouped by size (index k holds faces with k vertices).
  std::vector<std::vector<std::uint32_t>> faces_by_size() const;

 private:
  std::size_t vertices_;
  std::vector<std::uint32_t> facets_;
};

SimplicialComplex cycle_complex(std::size_t m);
SimplicialComplex full_simplex(std::size_t m);
SimplicialComplex complex_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimplicialComplex& c);

/// Entry k is dim H~_{k-1}, so the vector starts at degree -1. Empty for the
/// void complex, whose reduced homology vanishes.
std::vector<std::size_t> reduced_homology_dims(const SimplicialComplex& c, const PrimeField& field);
/// dim H~_q, zero outside the stored range.
std::size_t reduced_homology(const std::vector<std::size_t>& dims, int q);

/// Sum over j-subsets W of dim H~_{j-i-1}(Δ_W).
std::size_t hochster_betti(const SimplicialComplex& c, const PrimeField& field, std::size_t i, std::size_t j);
BettiTable hochster_table(const SimplicialComplex& c, const PrimeField& field);

/// k[x_0..x_{m-1}] / I_Δ through degree `top`: standard monomials are those
/// supported on faces.
QuotientSlices stanley_reisner_quotient(const SimplicialComplex& c, const PrimeField& field, std::size_t top);

/// Koszul Betti numbers of the Stanley-Reisner ring for m <= 10 vertices.
/// Throws BudgetExceeded above that.
KoszulBetti sr_koszul_betti(const SimplicialComplex& c, const PrimeField& field);
BettiTable sr_betti_via_koszul(const SimplicialComplex& c, const PrimeField& field);
/// HF of the Stanley-Reisner ring in degrees 0..top.
std::vector<std::size_t> stanley_reisner_hilbert(const SimplicialComplex& c, std::size_t top);

/// e_i - e_{i+1} (indices mod s) in F^s.
std::vector<std::vector<Word>> cyclic_differences(std::size_t s, const PrimeField& field);
/// Every proper subfamily independent and the whole family dependent.
bool is_circuit_family(const std::vector<std::vector<Word>>& vectors, const PrimeField& field);
bool cyclic_differences_form_circuit(std::size_t s, const PrimeField& field);

/// The n+2 points e_i - e_{i+1} of the hyperplane sum x_i = 0 in P^{n+1},
/// written in the basis f_k = e_{k-1} - e_k (k = 1..n+1) of that hyperplane.
PointConfig cycle_section_points(std::size_t n, const PrimeField& field);

}  // namespace betticover
