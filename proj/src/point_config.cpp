#include "betticover/point_config.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace betticover {

namespace {

std::vector<Word> random_vector(const PrimeField& f, std::size_t len, Rng& rng) {
  std::uniform_int_distribution<Word> dist(0, f.modulus() - 1);
  std::vector<Word> v(len);
  for (auto& x : v) x = dist(rng);
  return v;
}

std::vector<Word> random_nonzero_vector(const PrimeField& f, std::size_t len, Rng& rng) {
  for (;;) {
    auto v = random_vector(f, len, rng);
    if (std::any_of(v.begin(), v.end(), [](Word x) { return x != 0; })) return v;
  }
}

// sum_k c_k * basis[k]
std::vector<Word> combine(const PrimeField& f, const std::vector<std::vector<Word>>& basis,
                          const std::vector<Word>& coeffs) {
  std::vector<Word> out(basis.front().size(), 0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(out[i], f.mul(coeffs[k], basis[k][i]));
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

long long parse_integer(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": not an integer: '" + token + "'");
  }
}

}  // namespace

DuplicatePointError::DuplicatePointError(std::size_t a, std::size_t b)
    : std::invalid_argument("points " + std::to_string(a) + " and " + std::to_string(b) +
                            " are the same projective point"),
      first(a),
      second(b) {}

ProjPoint normalize(const PrimeField& field, std::vector<Word> coords) {
  auto lead = std::find_if(coords.begin(), coords.end(), [](Word x) { return x != 0; });
  if (lead == coords.end()) throw std::invalid_argument("zero vector is not a projective point");
  const Word scale = field.inv(*lead);
  for (auto& x : coords) x = field.mul(x, scale);
  return ProjPoint{std::move(coords)};
}

PointConfig::PointConfig(const PrimeField& field, std::size_t n, std::vector<ProjPoint> points)
    : field_(field), n_(n), points_(std::move(points)) {
  if (n_ < 1) throw std::invalid_argument("projective dimension must be at least 1");
  std::map<std::vector<Word>, std::size_t> seen;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& pt = points_[i];
    if (pt.coords.size() != n_ + 1) {
      throw std::invalid_argument("point " + std::to_string(i) + " has " +
                                  std::to_string(pt.coords.size()) + " coordinates, expected " +
                                  std::to_string(n_ + 1));
    }
    for (auto& c : pt.coords) c %= field_.modulus();
    pt = normalize(field_, std::move(pt.coords));
    auto [it, inserted] = seen.emplace(pt.coords, i);
    if (!inserted) throw DuplicatePointError(it->second, i);
  }
}

PointConfig PointConfig::from_coordinates(const PrimeField& field, std::size_t n,
                                          const std::vector<std::vector<long long>>& rows) {
  std::vector<ProjPoint> pts;
  pts.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n + 1) {
      throw std::invalid_argument("point " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " coordinates, expected " +
                                  std::to_string(n + 1));
    }
    std::vector<Word> c;
    c.reserve(rows[i].size());
    for (long long v : rows[i]) c.push_back(field.from_int(v));
    try {
      pts.push_back(normalize(field, std::move(c)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("point " + std::to_string(i) + " is the zero vector");
    }
  }
  return PointConfig(field, n, std::move(pts));
}

Matrix PointConfig::coordinate_matrix() const {
  Matrix m(field_, static_cast<Index>(points_.size()), static_cast<Index>(n_ + 1));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t c = 0; c <= n_; ++c) {
      m.entries()(static_cast<Index>(i), static_cast<Index>(c)) = points_[i].coords[c];
    }
  }
  return m;
}

PointConfig PointConfig::without(std::size_t index) const {
  if (index >= points_.size()) throw std::out_of_range("point index out of range");
  auto pts = points_;
  pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(index));
  return PointConfig(field_, n_, std::move(pts));
}

PointConfig PointConfig::subset(const std::vector<std::size_t>& indices) const {
  std::vector<ProjPoint> pts;
  pts.reserve(indices.size());
  for (auto i : indices) pts.push_back(points_.at(i));
  return PointConfig(field_, n_, std::move(pts));
}

PointConfig parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(j);
  }

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  Word p = 0;
  long long n = -1;
  std::vector<std::vector<long long>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens(line);
    std::string tok;
    if (!have_header) {
      bool have_p = false;
      bool have_n = false;
      while (tokens >> tok) {
        if (tok.rfind("p=", 0) == 0) {
          const long long v = parse_integer(tok.substr(2), line_no);
          if (v < 2) throw ParseError("line " + std::to_string(line_no) + ": p must be a prime");
          p = static_cast<Word>(v);
          have_p = true;
        } else if (tok.rfind("n=", 0) == 0) {
          n = parse_integer(tok.substr(2), line_no);
          have_n = true;
        } else {
          throw ParseError("line " + std::to_string(line_no) + ": unexpected header token '" + tok + "'");
        }
      }
      if (!have_p || !have_n) {
        throw ParseError("line " + std::to_string(line_no) + ": header must be 'p=<prime> n=<dim>'");
      }
      if (n < 1) throw ParseError("line " + std::to_string(line_no) + ": n must be at least 1");
      if (!is_prime(p)) throw ParseError("p=" + std::to_string(p) + " is not prime");
      have_header = true;
      continue;
    }
    std::vector<long long> row;
    while (tokens >> tok) row.push_back(parse_integer(tok, line_no));
    if (row.size() != static_cast<std::size_t>(n) + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n + 1) +
                       " coordinates, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("missing 'p=<prime> n=<dim>' header");
  try {
    return PointConfig::from_coordinates(PrimeField(p), static_cast<std::size_t>(n), rows);
  } catch (const DuplicatePointError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

PointConfig config_from_json(const nlohmann::json& j) {
  try {
    const auto p = j.at("p").get<long long>();
    const auto n = j.at("n").get<long long>();
    if (p < 2 || !is_prime(static_cast<Word>(p))) throw ParseError("p=" + std::to_string(p) + " is not prime");
    if (n < 1) throw ParseError("n must be at least 1");
    auto rows = j.at("points").get<std::vector<std::vector<long long>>>();
    return PointConfig::from_coordinates(PrimeField(static_cast<Word>(p)), static_cast<std::size_t>(n), rows);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed point JSON: ") + e.what());
  } catch (const DuplicatePointError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

nlohmann::json to_json(const PointConfig& x) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pt : x.points()) pts.push_back(pt.coords);
  return {{"p", x.field().modulus()}, {"n", x.dim()}, {"points", pts}};
}

std::string format_config(const PointConfig& x) {
  std::ostringstream out;
  out << "p=" << x.field().modulus() << " n=" << x.dim() << "\n";
  for (const auto& pt : x.points()) {
    for (std::size_t i = 0; i < pt.coords.size(); ++i) out << (i ? " " : "") << pt.coords[i];
    out << "\n";
  }
  return out.str();
}

std::uint64_t config_hash(const PointConfig& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_config(x)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool is_nondegenerate(const PointConfig& x) {
  return rank(x.coordinate_matrix()) == static_cast<Index>(x.dim() + 1);
}

bool is_linearly_general(const PointConfig& x) {
  const std::size_t k = std::min(x.size(), x.dim() + 1);
  const Matrix coords = x.coordinate_matrix();
  std::vector<bool> pick(x.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    Matrix sub(x.field(), static_cast<Index>(k), coords.cols());
    Index r = 0;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      if (pick[i]) sub.entries().row(r++) = coords.entries().row(static_cast<Index>(i));
    }
    if (rank(sub) != static_cast<Index>(k)) return false;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return true;
}

std::size_t projective_space_size(Word p, std::size_t n) {
  // 1 + p + ... + p^n
  constexpr auto cap = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t term = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (total > cap - term) return cap;
    total += term;
    if (k < n) {
      if (term > cap / p) return cap;
      term *= p;
    }
  }
  return total;
}

PointConfig moment_curve_config(const PrimeField& field, std::size_t n, const std::vector<Word>& params) {
  std::vector<Word> sorted = params;
  for (auto& t : sorted) t %= field.modulus();
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("moment curve parameters must be distinct in F_p");
  }
  std::vector<ProjPoint> pts;
  for (Word t : params) {
    std::vector<Word> c(n + 1);
    Word power = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      c[i] = power;
      power = field.mul(power, t % field.modulus());
    }
    pts.push_back(ProjPoint{std::move(c)});
  }
  return PointConfig(field, n, std::move(pts));
}

PointConfig two_plane_config(const PrimeField& field, std::size_t n, std::size_t a, std::size_t b,
                             std::size_t c1, std::size_t c2, Rng& rng) {
  if (n < 1 || a + b + 1 != n) throw std::invalid_argument("two-plane config needs a + b = n - 1");
  if (c1 < a + 1 || c2 < b + 1) {
    throw std::invalid_argument("each plane needs at least dim + 1 points to be spanned");
  }
  if (c1 > projective_space_size(field.modulus(), a) || c2 > projective_space_size(field.modulus(), b)) {
    throw FieldTooSmall("F_" + std::to_string(field.modulus()) + " cannot host the requested counts");
  }

  // A random basis of F^{n+1}; the first a+1 vectors span U, the rest span V.
  std::vector<std::vector<Word>> basis;
  do {
    basis.clear();
    for (std::size_t k = 0; k <= n; ++k) basis.push_back(random_vector(field, n + 1, rng));
  } while (rank_of_vectors(basis, field) != static_cast<Index>(n + 1));
  const std::vector<std::vector<Word>> u(basis.begin(), basis.begin() + static_cast<std::ptrdiff_t>(a + 1));
  const std::vector<std::vector<Word>> v(basis.begin() + static_cast<std::ptrdiff_t>(a + 1), basis.end());

  std::vector<ProjPoint> pts;
  std::map<std::vector<Word>, bool> seen;
  auto fill = [&](const std::vector<std::vector<Word>>& span_basis, std::size_t count) {
    std::vector<ProjPoint> chosen;
    // The basis vectors themselves guarantee the points span the plane.
    for (const auto& vec : span_basis) {
      auto pt = normalize(field, vec);
      seen.emplace(pt.coords, true);
      chosen.push_back(std::move(pt));
    }
    while (chosen.size() < count) {
      auto coeffs = random_nonzero_vector(field, span_basis.size(), rng);
      auto pt = normalize(field, combine(field, span_basis, coeffs));
      if (seen.emplace(pt.coords, true).second) chosen.push_back(std::move(pt));
    }
    pts.insert(pts.end(), chosen.begin(), chosen.end());
  };
  fill(u, c1);
  fill(v, c2);
  std::shuffle(pts.begin(), pts.end(), rng);
  return PointConfig(field, n, std::move(pts));
}

PointConfig concurrent_lines_config(const PrimeField& field, std::size_t n) {
  if (n < 1) throw std::invalid_argument("projective dimension must be at least 1");
  std::vector<std::vector<long long>> rows;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<long long> e(n + 1, 0);
    e[k] = 1;
    rows.push_back(e);
    e[0] = 1;
    rows.push_back(e);
  }
  return PointConfig::from_coordinates(field, n, rows);
}

PointConfig random_config(const PrimeField& field, std::size_t n, std::size_t size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("random config needs at least one point");
  if (size > projective_space_size(field.modulus(), n)) {
    throw FieldTooSmall("P^" + std::to_string(n) + " over F_" + std::to_string(field.modulus()) +
                        " has fewer than " + std::to_string(size) + " points");
  }
  std::vector<ProjPoint> pts;
  std::map<std::vector<Word>, bool> seen;
  while (pts.size() < size) {
    auto pt = normalize(field, random_nonzero_vector(field, n + 1, rng));
    if (seen.emplace(pt.coords, true).second) pts.push_back(std::move(pt));
  }
  return PointConfig(field, n, std::move(pts));
}

PointConfig apply_linear_map(const PointConfig& x, const Matrix& g) {
  const auto& f = x.field();
  if (g.rows() != static_cast<Index>(x.dim() + 1) || g.cols() != g.rows()) {
    throw std::invalid_argument("linear map has the wrong shape");
  }
  std::vector<ProjPoint> pts;
  for (const auto& pt : x.points()) {
    std::vector<Word> image(x.dim() + 1, 0);
    for (Index r = 0; r < g.rows(); ++r) {
      Word acc = 0;
      for (Index c = 0; c < g.cols(); ++c) acc = f.add(acc, f.mul(g(r, c), pt.coords[static_cast<std::size_t>(c)]));
      image[static_cast<std::size_t>(r)] = acc;
    }
    pts.push_back(normalize(f, std::move(image)));
  }
  return PointConfig(f, x.dim(), std::move(pts));
}

Matrix random_invertible(const PrimeField& field, Index size, Rng& rng) {
  for (;;) {
    Matrix g(field, size, size);
    std::uniform_int_distribution<Word> dist(0, field.modulus() - 1);
    for (Index r = 0; r < size; ++r) {
      for (Index c = 0; c < size; ++c) g.entries()(r, c) = dist(rng);
    }
    if (rank(g) == size) return g;
  }
}

}  // namespace betticover
