#pragma once

#include "betticover/exact_linalg.hpp"
#include "betticover/point_config.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace betticover {

/// Monomial in x_0..x_n, stored by exponent vector.
struct Monomial {
  std::vector<unsigned> exponents;

  unsigned degree() const;
  Monomial times(std::size_t var) const;
  std::string to_string() const;

  /// Graded-lex comparison with x_0 > x_1 > ... > x_n; "greater" sorts first.
  static bool grlex_greater(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// C(a, b), saturating at SIZE_MAX.
std::size_t binomial(std::size_t a, std::size_t b);

/// All C(n+d, d) monomials of degree d in n+1 variables, in descending grlex order.
std::vector<Monomial> monomial_basis(std::size_t n, std::size_t d);

using SparseVector = std::vector<std::pair<std::size_t, Word>>;

/// One degree of a graded quotient ring S/I: a monomial basis of (S/I)_d and
/// the action of each variable into degree d + 1.
struct QuotientBasis {
  std::vector<Monomial> standard;
  /// times[k][t] = x_t * standard[k], written in the standard basis of the next degree.
  std::vector<std::vector<SparseVector>> times;
};

/// Degrees 0..top of a graded quotient; `times` is populated below `top`.
struct QuotientSlices {
  PrimeField field;
  std::size_t num_vars = 0;
  std::vector<QuotientBasis> degrees;

  std::size_t top_degree() const { return degrees.empty() ? 0 : degrees.size() - 1; }
  std::size_t dim(std::size_t d) const { return d < degrees.size() ? degrees[d].standard.size() : 0; }

  /// Matrix of x_t : (S/I)_d -> (S/I)_{d+1}.
  Matrix variable_map(std::size_t d, std::size_t t) const;
  /// Matrix of multiplication by the linear form with these coefficients.
  Matrix linear_map(std::size_t d, const std::vector<Word>& coeffs) const;
};

/// |X| x C(n+d, d): values of each degree-d monomial at each normalized point.
Matrix evaluation_matrix(const PointConfig& x, std::size_t d);

/// S/I(X) through degree `top`. Standard monomials are the grlex-smallest
/// monomials whose evaluations are independent, i.e. the complement of the
/// leading monomials of I(X)_d.
QuotientSlices point_quotient(const PointConfig& x, std::size_t top);

/// Least d with HF(d) = |X|.
std::size_t regularity_index(const PointConfig& x);

/// S/I(X) through degree regularity_index(x) + extra, paired with the regularity index.
std::pair<QuotientSlices, std::size_t> point_quotient_past_regularity(const PointConfig& x, std::size_t extra);

/// I(X)_d in reduced row echelon form over the grlex monomial basis.
struct IdealSlice {
  std::size_t degree = 0;
  Matrix basis;
  std::vector<Monomial> pivots;
  std::vector<Monomial> standard;
};
IdealSlice ideal_slice(const PointConfig& x, std::size_t d);

std::size_t hilbert_function(const PointConfig& x, std::size_t d);

struct LinearForm {
  std::vector<Word> coeffs;
  std::string to_string() const;
  friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// True when the form vanishes at no point of X.
bool is_nonzerodivisor(const PointConfig& x, const LinearForm& ell);

/// The first `count` normalized forms vanishing at no point of X, enumerated
/// by height (largest coefficient) and lexicographically within a height.
std::vector<LinearForm> nzd_linear_forms(const PointConfig& x, std::size_t count);
/// Throws FieldTooSmall when every form vanishes somewhere on X.
LinearForm find_nzd_linear_form(const PointConfig& x);

/// dim soc(S/(I(X) + ell))_d for d = 0..max_d.
std::vector<std::size_t> socle_dims(const PointConfig& x, const LinearForm& ell, std::size_t max_d);
std::vector<std::size_t> socle_dims(const QuotientSlices& q, const LinearForm& ell, std::size_t max_d);

/// Least d >= 1 carrying socle in the Artinian reduction, or nullopt when no
/// socle appears below the truncation degree.
std::optional<std::size_t> isoc_via_socle(const PointConfig& x);
std::optional<std::size_t> isoc_via_socle(const PointConfig& x, const LinearForm& ell);

}  // namespace betticover
