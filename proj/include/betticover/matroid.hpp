#pragma once

#include "betticover/exact_linalg.hpp"
#include "betticover/point_config.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace betticover {

/// Subset of a ground set of at most 64 elements.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
  ElementSet(std::initializer_list<std::size_t> elements);

  static ElementSet full(std::size_t m) {
    return ElementSet(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }
  static ElementSet from_indices(const std::vector<std::size_t>& elements);

  std::uint64_t bits() const { return bits_; }
  bool contains(std::size_t x) const { return (bits_ >> x) & 1U; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }

  ElementSet with(std::size_t x) const { return ElementSet(bits_ | (std::uint64_t{1} << x)); }
  ElementSet without(std::size_t x) const { return ElementSet(bits_ & ~(std::uint64_t{1} << x)); }
  bool is_subset_of(ElementSet other) const { return (bits_ & ~other.bits_) == 0; }

  std::vector<std::size_t> elements() const;

  friend ElementSet operator|(ElementSet a, ElementSet b) { return ElementSet(a.bits_ | b.bits_); }
  friend ElementSet operator&(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & b.bits_); }
  friend ElementSet operator-(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & ~b.bits_); }
  friend auto operator<=>(ElementSet, ElementSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

std::string to_string(ElementSet s);

enum class AxiomCheck { Enforce, Skip };

/// Matroid given by a rank oracle: either the row vectors of a coordinate
/// matrix or an explicit family of independent sets.
class Matroid {
 public:
  static constexpr std::size_t kMaxExplicit = 16;

  static Matroid linear(const Matrix& vectors);
  static Matroid from_points(const PointConfig& x);
  /// The family is closed downward on load, so listing maximal sets is enough.
  static Matroid from_independent_sets(std::size_t ground, const std::vector<std::vector<std::size_t>>& sets,
                                       AxiomCheck check = AxiomCheck::Enforce);
  static Matroid uniform(std::size_t ground, std::size_t rank);

  std::size_t size() const { return labels_.size(); }
  ElementSet ground() const { return ElementSet::full(size()); }
  bool is_linear() const { return vectors_.has_value(); }
  /// Original index of each element; deletion keeps this mapping.
  const std::vector<std::size_t>& labels() const { return labels_; }
  const std::optional<Matrix>& vectors() const { return vectors_; }

  std::size_t rank(ElementSet s) const;
  std::size_t rank() const { return rank(ground()); }
  bool is_independent(ElementSet s) const { return rank(s) == s.size(); }

  friend Matroid delete_element(const Matroid& m, std::size_t x);

 private:
  Matroid() = default;
  std::vector<std::size_t> labels_;
  std::optional<Matrix> vectors_;
  std::vector<std::uint8_t> rank_table_;  // explicit matroids only, indexed by bits
};

/// Checks r(empty) = 0, monotonicity, r(S) <= |S| and submodularity
/// (exhaustively for |E| <= 8, else on `samples` random triples).
bool satisfies_rank_axioms(const Matroid& m, Rng& rng, std::size_t samples = 1000);

ElementSet closure(const Matroid& m, ElementSet s);

struct Circuit {
  std::vector<std::size_t> elements;
  friend auto operator<=>(const Circuit&, const Circuit&) = default;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All circuits with at most `max_size` elements, sorted lexicographically.
std::vector<Circuit> circuits(const Matroid& m, std::size_t max_size);
Circuit fundamental_circuit(const Matroid& m, ElementSet basis, std::size_t x);

struct CoverCertificate {
  ElementSet part1;
  ElementSet part2;
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  /// Row bases of span(part1), span(part2) for linear matroids.
  std::optional<Matrix> basis1;
  std::optional<Matrix> basis2;
};

/// Searches for E = S1 u S2 (both nonempty) with r(S1) + r(S2) <= t + 1.
/// Returns the partition minimizing r1 + r2, ties broken by the
/// lexicographically least side assignment (element 0 first, side 1 first).
std::optional<CoverCertificate> is_Dt(const Matroid& m, std::size_t t);

Matroid delete_element(const Matroid& m, std::size_t x);

bool is_uniform(const Matroid& m, std::size_t rank);

enum class DeletionVerdict { HypothesisFails, ConclusionUniform, Counterexample };
std::string to_string(DeletionVerdict v);

struct DeletionCheck {
  DeletionVerdict verdict;
  std::vector<std::string> transcript;
};

/// Evaluates "M not D_n and every single-element deletion D_n"; when that
/// holds, M must be the uniform matroid on n+2 elements of rank n+1.
DeletionCheck check_deletion_theorem(const Matroid& m, std::size_t n);

/// Every pair of distinct circuits sharing x leaves some circuit inside
/// (C1 u C2) - x. Throws BudgetExceeded when |E| > 20.
bool verify_circuit_elimination(const Matroid& m, std::size_t budget = 20);

/// Certificate re-expressed as two disjoint flats whose ranks sum to exactly
/// t + 1 (a + b = t - 1), padding the spans inside the ambient space when
/// the cover found is smaller than that.
struct NormalizedCover {
  std::size_t a = 0;
  std::size_t b = 0;
  Matrix flat1;
  Matrix flat2;
  bool disjoint = false;
};
NormalizedCover normalize_cover(const Matroid& m, const CoverCertificate& cert, std::size_t t);

Matroid matroid_from_json(const nlohmann::json& j, AxiomCheck check = AxiomCheck::Enforce);
nlohmann::json to_json(const CoverCertificate& c, const Matroid& m);

}  // namespace betticover
