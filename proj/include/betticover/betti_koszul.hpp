#pragma once

#include "betticover/exact_linalg.hpp"
#include "betticover/graded_ring.hpp"
#include "betticover/point_config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace betticover {

/// Graded Betti numbers beta_{i,j}; entries not stored are zero.
class BettiTable {
 public:
  BettiTable() = default;
  BettiTable(std::size_t num_vars, std::size_t max_degree) : num_vars_(num_vars), max_degree_(max_degree) {}

  std::size_t num_vars() const { return num_vars_; }
  std::size_t max_degree() const { return max_degree_; }

  std::size_t operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::size_t value);

  /// Nonzero entries keyed by (i, j).
  const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& entries() const { return entries_; }

  /// Equal when the nonzero entries agree.
  friend bool operator==(const BettiTable& a, const BettiTable& b) { return a.entries_ == b.entries_; }

 private:
  std::size_t num_vars_ = 0;
  std::size_t max_degree_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> entries_;
};

/// Macaulay-style layout: rows j - i, columns i, zeros shown as '.'.
std::string render(const BettiTable& t, std::optional<std::pair<std::size_t, std::size_t>> highlight = std::nullopt);
nlohmann::json to_json(const BettiTable& t);
BettiTable betti_table_from_json(const nlohmann::json& j);

/// (K_i (x) S/I)_j with basis e_T (x) mu, |T| = i, mu standard of degree j - i,
/// and its Koszul differential into the (i - 1, j) slice.
struct KoszulSlice {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> basis;
  SparseMatrix differential;
};

KoszulSlice koszul_slice(const QuotientSlices& q, std::size_t i, std::size_t j);

/// Slices (i, j) with j - i <= max_row and j <= max_degree.
struct KoszulWindow {
  std::size_t max_row = 0;
  std::size_t max_degree = 0;
};

struct KoszulBetti {
  BettiTable table;
  /// d o d vanished on every consecutive pair of assembled slices.
  bool d_squared_zero = true;
  std::size_t compositions_checked = 0;
};

/// Betti numbers of any graded quotient given degreewise, as Koszul homology.
KoszulBetti koszul_betti(const QuotientSlices& q, KoszulWindow window);

/// Full Betti computation for S/I(X) with the data needed for sanity checks.
struct BettiAnalysis {
  BettiTable table;
  std::size_t num_points = 0;
  std::size_t regularity = 0;
  /// HF(d) for d = 0..table.max_degree().
  std::vector<std::size_t> hilbert;
  bool d_squared_zero = true;
  std::size_t compositions_checked = 0;
};

BettiAnalysis analyze_betti(const PointConfig& x);
BettiTable betti_table(const PointConfig& x);
std::size_t betti_number(const PointConfig& x, std::size_t i, std::size_t j);

/// beta_{n,n+1}(S/I(X)) != 0; refuses degenerate X.
bool main_predicate(const PointConfig& x);

/// min { r >= 1 : beta_{n,n+r} != 0 }; throws std::logic_error if the
/// computed window holds no such r.
std::size_t isoc_via_betti(const PointConfig& x);
std::size_t isoc_from_table(const BettiTable& t, std::size_t n);

struct StructuralChecks {
  bool hilbert_series = true;
  bool top_vanishes = true;
  bool beta00 = true;
  bool d_squared_zero = true;
  bool guard_row_zero = true;
  bool projective_dimension = true;
  bool all() const {
    return hilbert_series && top_vanishes && beta00 && d_squared_zero && guard_row_zero && projective_dimension;
  }
  std::string failures() const;
};

/// sum_i (-1)^i beta_{i,j} against the coefficients of HF(t) (1 - t)^{num_vars}
/// for every degree j covered by `hilbert`.
bool hilbert_series_identity(const BettiTable& t, const std::vector<std::size_t>& hilbert);

/// Hilbert-series identity, beta_{n+1,*} = 0, beta_{0,0} = 1, d o d = 0,
/// the regularity guard row, and pd = n for nonempty point sets.
StructuralChecks check_structure(const BettiAnalysis& a);

}  // namespace betticover
