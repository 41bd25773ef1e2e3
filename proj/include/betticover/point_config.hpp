#pragma once

#include "betticover/exact_linalg.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace betticover {

using Rng = std::mt19937_64;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicatePointError : public std::invalid_argument {
 public:
  DuplicatePointError(std::size_t first, std::size_t second);
  std::size_t first;
  std::size_t second;
};

/// Raised whenever the ground field cannot host the requested object.
class FieldTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of P^n, stored with its first nonzero coordinate equal to 1.
struct ProjPoint {
  std::vector<Word> coords;

  friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// Scales `coords` to the canonical representative. Throws on the zero vector.
ProjPoint normalize(const PrimeField& field, std::vector<Word> coords);

/// An ordered set of distinct points in P^n over F_p.
class PointConfig {
 public:
  PointConfig(const PrimeField& field, std::size_t n, std::vector<ProjPoint> points);

  /// Reduces and normalizes arbitrary integer rows.
  static PointConfig from_coordinates(const PrimeField& field, std::size_t n,
                                      const std::vector<std::vector<long long>>& rows);

  const PrimeField& field() const { return field_; }
  std::size_t dim() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<ProjPoint>& points() const { return points_; }
  const ProjPoint& point(std::size_t i) const { return points_.at(i); }

  /// |X| x (n+1), one normalized point per row.
  Matrix coordinate_matrix() const;

  PointConfig without(std::size_t index) const;
  PointConfig subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const PointConfig& a, const PointConfig& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.points_ == b.points_;
  }

 private:
  PrimeField field_;
  std::size_t n_;
  std::vector<ProjPoint> points_;
};

/// Accepts the text format (`p=.. n=..` header, one point per line, `#`
/// comments) or the JSON object form, detected by a leading `{`.
PointConfig parse_config(std::string_view text);
PointConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PointConfig& x);
/// Text format; parse_config(format_config(x)) == x.
std::string format_config(const PointConfig& x);

/// Stable 64-bit FNV-1a hash of format_config(x).
std::uint64_t config_hash(const PointConfig& x);

bool is_nondegenerate(const PointConfig& x);
bool is_linearly_general(const PointConfig& x);

/// Number of points of P^n(F_p), saturating at SIZE_MAX.
std::size_t projective_space_size(Word p, std::size_t n);

/// Points (1, t, ..., t^n) for each parameter t.
PointConfig moment_curve_config(const PrimeField& field, std::size_t n, const std::vector<Word>& params);

/// c1 points spanning a random a-plane U together with c2 points spanning a
/// random b-plane V, with U and V disjoint and a + b = n - 1. Point order is
/// shuffled.
PointConfig two_plane_config(const PrimeField& field, std::size_t n, std::size_t a, std::size_t b,
                             std::size_t c1, std::size_t c2, Rng& rng);

/// Two points on each of n lines through the common point e_0 (not in X),
/// the lines spanning P^n: e_k and e_0 + e_k for k = 1..n.
PointConfig concurrent_lines_config(const PrimeField& field, std::size_t n);

/// `size` distinct uniformly random points.
PointConfig random_config(const PrimeField& field, std::size_t n, std::size_t size, Rng& rng);

/// Image of every point under the invertible (n+1)x(n+1) matrix g (acting on column vectors).
PointConfig apply_linear_map(const PointConfig& x, const Matrix& g);

/// Random invertible square matrix.
Matrix random_invertible(const PrimeField& field, Index size, Rng& rng);

}  // namespace betticover
