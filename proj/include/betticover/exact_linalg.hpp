#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace betticover {

using Word = std::uint64_t;
using Index = Eigen::Index;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(Word n);

/// Arithmetic in F_p for a machine-word prime p. Scalars are always kept in
/// [0, p); products go through a double-width intermediate.
class PrimeField {
 public:
  explicit PrimeField(Word p);

  Word modulus() const { return p_; }

  Word from_int(long long v) const;
  Word add(Word a, Word b) const { return a >= p_ - b ? a - (p_ - b) : a + b; }
  Word sub(Word a, Word b) const { return a >= b ? a - b : a + (p_ - b); }
  Word neg(Word a) const { return a == 0 ? 0 : p_ - a; }
  Word mul(Word a, Word b) const {
    if (small_) return (a * b) % p_;
    return static_cast<Word>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  Word pow(Word a, Word e) const;
  /// Throws std::domain_error on zero.
  Word inv(Word a) const;

  /// Representative in (-p/2, p/2], handy for printing small negatives.
  long long centered(Word a) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  Word p_;
  bool small_;
};

using DenseStorage = Eigen::Matrix<Word, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major matrix over a prime field.
class Matrix {
 public:
  Matrix(const PrimeField& field, Index rows, Index cols);
  Matrix(const PrimeField& field, DenseStorage entries);

  /// Entries may be any integers; they are reduced mod p.
  static Matrix from_rows(const PrimeField& field, const std::vector<std::vector<long long>>& rows,
                          Index cols = -1);
  static Matrix identity(const PrimeField& field, Index size);

  const PrimeField& field() const { return field_; }
  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }

  Word operator()(Index r, Index c) const { return entries_(r, c); }
  void set(Index r, Index c, Word value) { entries_(r, c) = value % field_.modulus(); }

  const DenseStorage& entries() const { return entries_; }
  /// Mutable access; callers keep entries canonical.
  DenseStorage& entries() { return entries_; }

  std::vector<Word> row(Index r) const;
  bool is_zero() const { return (entries_.array() == 0).all(); }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows() == b.rows() && a.cols() == b.cols() &&
           a.entries_ == b.entries_;
  }

 private:
  PrimeField field_;
  DenseStorage entries_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<Index> pivot_cols;
  Index rank = 0;
};

RrefResult rref(const Matrix& m);
Index rank(const Matrix& m);

/// Rows form a basis of the right null space. Free columns, in increasing
/// order, are set to unit vectors; pivot entries are solved from the RREF.
Matrix kernel_basis(const Matrix& m);

Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);

/// Rows `vs[k]` stacked into a matrix; throws std::invalid_argument on ragged input.
Matrix stack_rows(std::span<const std::vector<Word>> vs, const PrimeField& field);
Index rank_of_vectors(std::span<const std::vector<Word>> vs, const PrimeField& field);

/// Column-compressed sparse matrix over F_p, used for Koszul and simplicial
/// boundary maps where most blocks decouple.
class SparseMatrix {
 public:
  struct Entry {
    Index row;
    Word value;
  };

  SparseMatrix(const PrimeField& field, Index rows, Index cols);

  const PrimeField& field() const { return field_; }
  Index rows() const { return rows_; }
  Index cols() const { return static_cast<Index>(columns_.size()); }

  /// Accumulates into column `c`, merging duplicate rows.
  void add(Index r, Index c, Word value);
  const std::vector<Entry>& column(Index c) const { return columns_[static_cast<std::size_t>(c)]; }

  Matrix to_dense() const;
  bool is_zero() const;

 private:
  PrimeField field_;
  Index rows_;
  std::vector<std::vector<Entry>> columns_;
};

/// Rank computed blockwise over the connected components of the
/// row/column incidence graph.
Index rank(const SparseMatrix& m);

/// a * b, both sparse.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace betticover
