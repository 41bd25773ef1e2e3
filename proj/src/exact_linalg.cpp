#include "betticover/exact_linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace betticover {

namespace {

Word mulmod64(Word a, Word b, Word m) {
  return static_cast<Word>((static_cast<unsigned __int128>(a) * b) % m);
}

Word powmod64(Word a, Word e, Word m) {
  Word result = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod64(result, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return result;
}

// Forward elimination in place; returns pivot columns. When `full` is set the
// result is reduced row echelon form, otherwise only rows below each pivot are
// cleared.
std::vector<Index> eliminate(const PrimeField& f, DenseStorage& a, bool full) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index k = r; k < rows; ++k) {
      if (a(k, c) != 0) {
        pivot = k;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) a.row(pivot).swap(a.row(r));
    Word* prow = a.row(r).data();
    const Word scale = f.inv(prow[c]);
    if (scale != 1) {
      for (Index j = c; j < cols; ++j) prow[j] = f.mul(prow[j], scale);
    }
    const Index start = full ? 0 : r + 1;
    for (Index k = start; k < rows; ++k) {
      if (k == r) continue;
      Word* krow = a.row(k).data();
      const Word factor = krow[c];
      if (factor == 0) continue;
      const Word nf = f.neg(factor);
      for (Index j = c; j < cols; ++j) {
        if (prow[j] != 0) krow[j] = f.add(krow[j], f.mul(nf, prow[j]));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

struct DisjointSets {
  std::vector<Index> parent;
  explicit DisjointSets(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  }
};

}  // namespace

bool is_prime(Word n) {
  if (n < 2) return false;
  for (Word small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  Word d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (Word a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    Word x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(Word p) : p_(p), small_(p < (Word{1} << 32)) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

Word PrimeField::from_int(long long v) const {
  if (v >= 0) return static_cast<Word>(v) % p_;
  // -(v + 1) avoids overflow at LLONG_MIN
  const Word m = (static_cast<Word>(-(v + 1)) + 1) % p_;
  return neg(m);
}

Word PrimeField::pow(Word a, Word e) const {
  Word result = 1 % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

Word PrimeField::inv(Word a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, p_ - 2);
}

long long PrimeField::centered(Word a) const {
  if (a > p_ / 2) return -static_cast<long long>(p_ - a);
  return static_cast<long long>(a);
}

Matrix::Matrix(const PrimeField& field, Index rows, Index cols)
    : field_(field), entries_(DenseStorage::Zero(rows, cols)) {}

Matrix::Matrix(const PrimeField& field, DenseStorage entries)
    : field_(field), entries_(std::move(entries)) {
  const Word p = field_.modulus();
  entries_ = entries_.unaryExpr([p](Word v) { return v % p; });
}

Matrix Matrix::from_rows(const PrimeField& field, const std::vector<std::vector<long long>>& rows,
                         Index cols) {
  if (cols < 0) cols = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Matrix m(field, static_cast<Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<Index>(rows[r].size()) != cols) {
      throw std::invalid_argument("ragged row " + std::to_string(r));
    }
    for (Index c = 0; c < cols; ++c) {
      m.entries_(static_cast<Index>(r), c) = field.from_int(rows[r][static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

Matrix Matrix::identity(const PrimeField& field, Index size) {
  return Matrix(field, DenseStorage::Identity(size, size));
}

std::vector<Word> Matrix::row(Index r) const {
  std::vector<Word> out(static_cast<std::size_t>(cols()));
  for (Index c = 0; c < cols(); ++c) out[static_cast<std::size_t>(c)] = entries_(r, c);
  return out;
}

RrefResult rref(const Matrix& m) {
  DenseStorage a = m.entries();
  auto pivots = eliminate(m.field(), a, true);
  const auto r = static_cast<Index>(pivots.size());
  return RrefResult{Matrix(m.field(), std::move(a)), std::move(pivots), r};
}

Index rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  DenseStorage a = m.entries();
  return static_cast<Index>(eliminate(m.field(), a, false).size());
}

Matrix kernel_basis(const Matrix& m) {
  const auto& f = m.field();
  const RrefResult rr = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (Index c : rr.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

  Matrix basis(f, m.cols() - rr.rank, m.cols());
  Index out = 0;
  for (Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis.entries()(out, free) = 1;
    for (Index k = 0; k < rr.rank; ++k) {
      basis.entries()(out, rr.pivot_cols[static_cast<std::size_t>(k)]) = f.neg(rr.reduced(k, free));
    }
    ++out;
  }
  return basis;
}

Matrix transpose(const Matrix& m) {
  return Matrix(m.field(), DenseStorage(m.entries().transpose()));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field mismatch");
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in multiply");
  const auto& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const Word aik = a(i, k);
      if (aik == 0) continue;
      for (Index j = 0; j < b.cols(); ++j) {
        out.entries()(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
      }
    }
  }
  return out;
}

Matrix stack_rows(std::span<const std::vector<Word>> vs, const PrimeField& field) {
  const Index cols = vs.empty() ? 0 : static_cast<Index>(vs.front().size());
  Matrix m(field, static_cast<Index>(vs.size()), cols);
  for (std::size_t r = 0; r < vs.size(); ++r) {
    if (static_cast<Index>(vs[r].size()) != cols) {
      throw std::invalid_argument("vector " + std::to_string(r) + " has length " +
                                  std::to_string(vs[r].size()) + ", expected " +
                                  std::to_string(cols));
    }
    for (Index c = 0; c < cols; ++c) {
      m.entries()(static_cast<Index>(r), c) = vs[r][static_cast<std::size_t>(c)] % field.modulus();
    }
  }
  return m;
}

Index rank_of_vectors(std::span<const std::vector<Word>> vs, const PrimeField& field) {
  return rank(stack_rows(vs, field));
}

SparseMatrix::SparseMatrix(const PrimeField& field, Index rows, Index cols)
    : field_(field), rows_(rows), columns_(static_cast<std::size_t>(cols)) {}

void SparseMatrix::add(Index r, Index c, Word value) {
  value %= field_.modulus();
  if (value == 0) return;
  auto& col = columns_[static_cast<std::size_t>(c)];
  for (auto it = col.begin(); it != col.end(); ++it) {
    if (it->row == r) {
      it->value = field_.add(it->value, value);
      if (it->value == 0) col.erase(it);
      return;
    }
  }
  col.push_back(Entry{r, value});
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(field_, rows_, cols());
  for (Index c = 0; c < cols(); ++c) {
    for (const auto& e : column(c)) m.entries()(e.row, c) = e.value;
  }
  return m;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) { return c.empty(); });
}

Index rank(const SparseMatrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  DisjointSets sets(rows + cols);
  for (Index c = 0; c < cols; ++c) {
    for (const auto& e : m.column(c)) sets.unite(rows + c, e.row);
  }

  // Group nonempty columns by component root, then rank each block densely.
  std::vector<std::vector<Index>> block_cols(static_cast<std::size_t>(rows + cols));
  std::vector<std::vector<Index>> block_rows(static_cast<std::size_t>(rows + cols));
  for (Index c = 0; c < cols; ++c) {
    if (m.column(c).empty()) continue;
    block_cols[static_cast<std::size_t>(sets.find(rows + c))].push_back(c);
  }
  for (Index r = 0; r < rows; ++r) block_rows[static_cast<std::size_t>(sets.find(r))].push_back(r);

  Index total = 0;
  std::vector<Index> local_row(static_cast<std::size_t>(rows), -1);
  for (std::size_t root = 0; root < block_cols.size(); ++root) {
    const auto& bc = block_cols[root];
    if (bc.empty()) continue;
    const auto& br = block_rows[root];
    if (bc.size() == 1 || br.size() == 1) {
      total += 1;
      continue;
    }
    for (std::size_t k = 0; k < br.size(); ++k) local_row[static_cast<std::size_t>(br[k])] = static_cast<Index>(k);
    Matrix block(m.field(), static_cast<Index>(br.size()), static_cast<Index>(bc.size()));
    for (std::size_t k = 0; k < bc.size(); ++k) {
      for (const auto& e : m.column(bc[k])) {
        block.entries()(local_row[static_cast<std::size_t>(e.row)], static_cast<Index>(k)) = e.value;
      }
    }
    total += rank(block);
  }
  return total;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field mismatch");
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in multiply");
  const auto& f = a.field();
  SparseMatrix out(f, a.rows(), b.cols());
  std::vector<Word> acc(static_cast<std::size_t>(a.rows()), 0);
  std::vector<Index> touched;
  for (Index c = 0; c < b.cols(); ++c) {
    touched.clear();
    for (const auto& be : b.column(c)) {
      for (const auto& ae : a.column(be.row)) {
        auto& slot = acc[static_cast<std::size_t>(ae.row)];
        if (slot == 0) touched.push_back(ae.row);
        slot = f.add(slot, f.mul(be.value, ae.value));
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Index r : touched) {
      auto& slot = acc[static_cast<std::size_t>(r)];
      if (slot != 0) out.add(r, c, slot);
      slot = 0;
    }
  }
  return out;
}

}  // namespace betticover
