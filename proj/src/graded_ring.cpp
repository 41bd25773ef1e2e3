#include "betticover/graded_ring.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace betticover {

namespace {

void enumerate(std::size_t var, std::size_t nvars, unsigned remaining, std::vector<unsigned>& exps,
               std::vector<Monomial>& out) {
  if (var + 1 == nvars) {
    exps[var] = remaining;
    out.push_back(Monomial{exps});
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    exps[var] = e;
    enumerate(var + 1, nvars, remaining - e, exps, out);
  }
}

Word evaluate(const PrimeField& f, const Monomial& m, const ProjPoint& pt) {
  Word v = 1;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) {
    if (m.exponents[i] != 0) v = f.mul(v, f.pow(pt.coords[i], m.exponents[i]));
  }
  return v;
}

// Reduces the columns of `values` (one per monomial, in descending grlex
// order) greedily from the smallest monomial. Returns the positions of the
// standard columns and the coordinates of every column over them.
struct NormalForms {
  std::vector<std::size_t> standard_positions;
  std::vector<SparseVector> coords;
};

NormalForms normal_forms(const Matrix& values) {
  const Index cols = values.cols();
  DenseStorage reversed(values.rows(), cols);
  for (Index c = 0; c < cols; ++c) reversed.col(c) = values.entries().col(cols - 1 - c);
  const auto rr = rref(Matrix(values.field(), std::move(reversed)));

  NormalForms out;
  // Pivot row k corresponds to original column cols-1-pivot_cols[k]; those are
  // ascending in grlex, so the standard basis (descending) is reversed.
  const auto rank = static_cast<std::size_t>(rr.rank);
  for (std::size_t k = 0; k < rank; ++k) {
    out.standard_positions.push_back(static_cast<std::size_t>(cols - 1 - rr.pivot_cols[rank - 1 - k]));
  }
  out.coords.resize(static_cast<std::size_t>(cols));
  for (Index c = 0; c < cols; ++c) {
    const Index rc = cols - 1 - c;
    auto& v = out.coords[static_cast<std::size_t>(c)];
    for (std::size_t k = 0; k < rank; ++k) {
      const Word w = rr.reduced(static_cast<Index>(k), rc);
      if (w != 0) v.emplace_back(rank - 1 - k, w);
    }
    std::sort(v.begin(), v.end());
  }
  return out;
}

// Builds S/I(X) one degree at a time. Candidates for degree d+1 are the
// products x_t * s over standard s of degree d; standard monomials form an
// order ideal, so nothing outside this set can be standard, and every
// non-candidate column already lies in the span of smaller standard columns.
class PointQuotientBuilder {
 public:
  explicit PointQuotientBuilder(const PointConfig& x) : x_(x) {
    slices_.field = x.field();
    slices_.num_vars = x.dim() + 1;
    Monomial one{std::vector<unsigned>(x.dim() + 1, 0)};
    candidates_ = {one};
    candidate_values_ = {std::vector<Word>(x.size(), 1)};
  }

  void advance() {
    const auto& f = x_.field();
    Matrix values(f, static_cast<Index>(x_.size()), static_cast<Index>(candidates_.size()));
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      for (std::size_t i = 0; i < x_.size(); ++i) {
        values.entries()(static_cast<Index>(i), static_cast<Index>(c)) = candidate_values_[c][i];
      }
    }
    const NormalForms nf = normal_forms(values);

    QuotientBasis basis;
    std::vector<std::vector<Word>> standard_values;
    for (auto pos : nf.standard_positions) {
      basis.standard.push_back(candidates_[pos]);
      standard_values.push_back(candidate_values_[pos]);
    }

    if (!slices_.degrees.empty()) {
      auto& prev = slices_.degrees.back();
      prev.times.assign(prev.standard.size(), std::vector<SparseVector>(slices_.num_vars));
      for (std::size_t k = 0; k < prev.standard.size(); ++k) {
        for (std::size_t t = 0; t < slices_.num_vars; ++t) {
          prev.times[k][t] = nf.coords[candidate_index_.at(prev.standard[k].times(t))];
        }
      }
    }

    // Next candidates.
    std::map<Monomial, std::vector<Word>> next;
    for (std::size_t k = 0; k < basis.standard.size(); ++k) {
      for (std::size_t t = 0; t < slices_.num_vars; ++t) {
        auto m = basis.standard[k].times(t);
        if (next.count(m)) continue;
        std::vector<Word> v(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) v[i] = f.mul(standard_values[k][i], x_.point(i).coords[t]);
        next.emplace(std::move(m), std::move(v));
      }
    }
    candidates_.clear();
    candidate_values_.clear();
    candidate_index_.clear();
    for (auto& [m, v] : next) {
      candidates_.push_back(m);
      candidate_values_.push_back(std::move(v));
    }
    // std::map orders lexicographically ascending on exponents; within a
    // single degree descending grlex is descending lex.
    std::reverse(candidates_.begin(), candidates_.end());
    std::reverse(candidate_values_.begin(), candidate_values_.end());
    for (std::size_t c = 0; c < candidates_.size(); ++c) candidate_index_.emplace(candidates_[c], c);

    slices_.degrees.push_back(std::move(basis));
  }

  std::size_t last_dim() const { return slices_.degrees.back().standard.size(); }
  QuotientSlices take() && { return std::move(slices_); }

 private:
  const PointConfig& x_;
  QuotientSlices slices_{x_.field(), 0, {}};
  std::vector<Monomial> candidates_;
  std::vector<std::vector<Word>> candidate_values_;
  std::map<Monomial, std::size_t> candidate_index_;
};

}  // namespace

unsigned Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0U); }

Monomial Monomial::times(std::size_t var) const {
  Monomial m = *this;
  ++m.exponents.at(var);
  return m;
}

std::string Monomial::to_string() const {
  std::ostringstream out;
  bool any = false;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    out << (any ? "*" : "") << "x" << i;
    if (exponents[i] > 1) out << "^" << exponents[i];
    any = true;
  }
  if (!any) out << "1";
  return out.str();
}

bool Monomial::grlex_greater(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da > db;
  return a.exponents > b.exponents;
}

std::size_t binomial(std::size_t a, std::size_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  std::size_t r = 1;
  for (std::size_t k = 1; k <= b; ++k) {
    const std::size_t num = a - b + k;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / k;
  }
  return r;
}

std::vector<Monomial> monomial_basis(std::size_t n, std::size_t d) {
  std::vector<Monomial> out;
  out.reserve(binomial(n + d, d));
  std::vector<unsigned> exps(n + 1, 0);
  enumerate(0, n + 1, static_cast<unsigned>(d), exps, out);
  return out;
}

Matrix QuotientSlices::variable_map(std::size_t d, std::size_t t) const {
  Matrix m(field, static_cast<Index>(dim(d + 1)), static_cast<Index>(dim(d)));
  const auto& times = degrees.at(d).times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (const auto& [row, v] : times[k][t]) m.entries()(static_cast<Index>(row), static_cast<Index>(k)) = v;
  }
  return m;
}

Matrix QuotientSlices::linear_map(std::size_t d, const std::vector<Word>& coeffs) const {
  Matrix m(field, static_cast<Index>(dim(d + 1)), static_cast<Index>(dim(d)));
  const auto& times = degrees.at(d).times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      if (coeffs[t] == 0) continue;
      for (const auto& [row, v] : times[k][t]) {
        auto& slot = m.entries()(static_cast<Index>(row), static_cast<Index>(k));
        slot = field.add(slot, field.mul(coeffs[t], v));
      }
    }
  }
  return m;
}

Matrix evaluation_matrix(const PointConfig& x, std::size_t d) {
  const auto monomials = monomial_basis(x.dim(), d);
  Matrix m(x.field(), static_cast<Index>(x.size()), static_cast<Index>(monomials.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t c = 0; c < monomials.size(); ++c) {
      m.entries()(static_cast<Index>(i), static_cast<Index>(c)) = evaluate(x.field(), monomials[c], x.point(i));
    }
  }
  return m;
}

QuotientSlices point_quotient(const PointConfig& x, std::size_t top) {
  PointQuotientBuilder builder(x);
  for (std::size_t d = 0; d <= top; ++d) builder.advance();
  return std::move(builder).take();
}

std::size_t regularity_index(const PointConfig& x) {
  PointQuotientBuilder builder(x);
  for (std::size_t d = 0;; ++d) {
    builder.advance();
    if (builder.last_dim() == x.size()) return d;
  }
}

std::pair<QuotientSlices, std::size_t> point_quotient_past_regularity(const PointConfig& x, std::size_t extra) {
  PointQuotientBuilder builder(x);
  std::size_t reg = 0;
  for (;; ++reg) {
    builder.advance();
    if (builder.last_dim() == x.size()) break;
  }
  for (std::size_t k = 0; k < extra; ++k) builder.advance();
  return {std::move(builder).take(), reg};
}

IdealSlice ideal_slice(const PointConfig& x, std::size_t d) {
  const auto monomials = monomial_basis(x.dim(), d);
  const NormalForms nf = normal_forms(evaluation_matrix(x, d));
  const auto& f = x.field();

  std::vector<bool> is_standard(monomials.size(), false);
  for (auto pos : nf.standard_positions) is_standard[pos] = true;

  IdealSlice out{d, Matrix(f, static_cast<Index>(monomials.size() - nf.standard_positions.size()),
                           static_cast<Index>(monomials.size())),
                 {}, {}};
  for (auto pos : nf.standard_positions) out.standard.push_back(monomials[pos]);
  Index row = 0;
  for (std::size_t c = 0; c < monomials.size(); ++c) {
    if (is_standard[c]) continue;
    // m - NF(m); NF only involves smaller standard monomials, so this is RREF.
    out.basis.entries()(row, static_cast<Index>(c)) = 1;
    for (const auto& [k, w] : nf.coords[c]) {
      out.basis.entries()(row, static_cast<Index>(nf.standard_positions[k])) = f.neg(w);
    }
    out.pivots.push_back(monomials[c]);
    ++row;
  }
  return out;
}

std::size_t hilbert_function(const PointConfig& x, std::size_t d) {
  return static_cast<std::size_t>(rank(evaluation_matrix(x, d)));
}

std::string LinearForm::to_string() const {
  std::ostringstream out;
  bool any = false;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    out << (any ? " + " : "");
    if (coeffs[i] != 1) out << coeffs[i] << "*";
    out << "x" << i;
    any = true;
  }
  if (!any) out << "0";
  return out.str();
}

bool is_nonzerodivisor(const PointConfig& x, const LinearForm& ell) {
  const auto& f = x.field();
  return std::all_of(x.points().begin(), x.points().end(), [&](const ProjPoint& pt) {
    Word v = 0;
    for (std::size_t i = 0; i < pt.coords.size(); ++i) v = f.add(v, f.mul(ell.coeffs.at(i), pt.coords[i]));
    return v != 0;
  });
}

std::vector<LinearForm> nzd_linear_forms(const PointConfig& x, std::size_t count) {
  std::vector<LinearForm> found;
  const std::size_t len = x.dim() + 1;
  const Word p = x.field().modulus();
  for (Word h = 1; h < p && found.size() < count; ++h) {
    std::vector<Word> c(len, 0);
    for (;;) {
      const auto lead = std::find_if(c.begin(), c.end(), [](Word v) { return v != 0; });
      const bool normalized = lead != c.end() && *lead == 1;
      if (normalized && *std::max_element(c.begin(), c.end()) == h) {
        LinearForm ell{c};
        if (is_nonzerodivisor(x, ell)) {
          found.push_back(std::move(ell));
          if (found.size() == count) break;
        }
      }
      // Next vector in [0, h]^len, lexicographic.
      std::size_t i = len;
      while (i > 0 && c[i - 1] == h) c[--i] = 0;
      if (i == 0) break;
      ++c[i - 1];
    }
  }
  return found;
}

LinearForm find_nzd_linear_form(const PointConfig& x) {
  auto forms = nzd_linear_forms(x, 1);
  if (forms.empty()) {
    throw FieldTooSmall("every linear form over F_" + std::to_string(x.field().modulus()) +
                        " vanishes at some point of X");
  }
  return forms.front();
}

std::vector<std::size_t> socle_dims(const QuotientSlices& q, const LinearForm& ell, std::size_t max_d) {
  if (q.top_degree() < max_d + 1) throw std::invalid_argument("quotient slices too shallow for socle computation");
  std::vector<std::size_t> dims;
  for (std::size_t d = 0; d <= max_d; ++d) {
    const std::size_t h = q.dim(d);
    const std::size_t image_below = d == 0 ? 0 : static_cast<std::size_t>(rank(q.linear_map(d - 1, ell.coeffs)));
    // Rows of `annihilator` cut out ell * (S/I)_d inside (S/I)_{d+1}.
    const Matrix annihilator = kernel_basis(transpose(q.linear_map(d, ell.coeffs)));
    std::size_t kernel = h;
    if (annihilator.rows() > 0 && h > 0) {
      DenseStorage stacked(annihilator.rows() * static_cast<Index>(q.num_vars), static_cast<Index>(h));
      for (std::size_t t = 0; t < q.num_vars; ++t) {
        const Matrix block = multiply(annihilator, q.variable_map(d, t));
        stacked.middleRows(static_cast<Index>(t) * annihilator.rows(), annihilator.rows()) = block.entries();
      }
      kernel = h - static_cast<std::size_t>(rank(Matrix(q.field, std::move(stacked))));
    }
    dims.push_back(kernel - image_below);
  }
  return dims;
}

std::vector<std::size_t> socle_dims(const PointConfig& x, const LinearForm& ell, std::size_t max_d) {
  if (!is_nonzerodivisor(x, ell)) throw std::invalid_argument("linear form vanishes at a point of X");
  return socle_dims(point_quotient(x, max_d + 1), ell, max_d);
}

std::optional<std::size_t> isoc_via_socle(const PointConfig& x, const LinearForm& ell) {
  if (!is_nondegenerate(x)) throw std::invalid_argument("isoc needs a nondegenerate configuration");
  const std::size_t max_d = regularity_index(x) + 1;
  const auto dims = socle_dims(x, ell, max_d);
  for (std::size_t d = 1; d < dims.size(); ++d) {
    if (dims[d] != 0) return d;
  }
  return std::nullopt;
}

std::optional<std::size_t> isoc_via_socle(const PointConfig& x) {
  return isoc_via_socle(x, find_nzd_linear_form(x));
}

}  // namespace betticover
