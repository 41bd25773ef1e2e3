#include "betticover/matroid.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace betticover;

namespace {

const PrimeField F101(101);

Matroid from_rows(const PrimeField& f, const std::vector<std::vector<long long>>& rows) {
  return Matroid::linear(Matrix::from_rows(f, rows));
}

// D_t straight from the flat lattice: two flats L1, L2 of rank >= 1 covering E
// with r(L1) + r(L2) <= t + 1.
bool dt_by_flats(const Matroid& m, std::size_t t) {
  std::set<std::uint64_t> flats;
  const std::uint64_t full = m.ground().bits();
  for (std::uint64_t s = 0; s <= full; ++s) flats.insert(closure(m, ElementSet(s)).bits());
  for (auto a : flats) {
    for (auto b : flats) {
      if ((a | b) != full) continue;
      const auto ra = m.rank(ElementSet(a)), rb = m.rank(ElementSet(b));
      if (ra >= 1 && rb >= 1 && ra + rb <= t + 1) return true;
    }
  }
  return false;
}

Matroid random_linear(const PrimeField& f, std::size_t elements, std::size_t dim, Rng& rng) {
  DenseStorage vs(static_cast<Index>(elements), static_cast<Index>(dim));
  for (Index i = 0; i < vs.rows(); ++i) {
    do {
      for (Index j = 0; j < vs.cols(); ++j) vs(i, j) = gen::scalar(f, rng);
    } while ((vs.row(i).array() == 0).all());
  }
  return Matroid::linear(Matrix(f, vs));
}

}  // namespace

TEST_CASE("rank examples") {
  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  CHECK(m.rank(ElementSet{}) == 0);
  CHECK(m.rank(ElementSet{0, 1, 2}) == 2);
  const auto u = Matroid::from_points(moment_curve_config(F101, 3, {0, 1, 2, 3, 4}));
  for (std::uint64_t s = 0; s < 32; ++s) {
    CHECK(u.rank(ElementSet(s)) == std::min<std::size_t>(ElementSet(s).size(), 4));
  }
}

TEST_CASE("closure examples") {
  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  CHECK(closure(m, m.ground()) == m.ground());
  CHECK(closure(m, ElementSet{0, 1}) == ElementSet({0, 1, 2}));
  CHECK(closure(m, ElementSet{}).empty());
}

TEST_CASE("circuit examples") {
  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  const auto cs = circuits(m, 3);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].elements == std::vector<std::size_t>{0, 1, 2});

  const auto u = Matroid::from_points(moment_curve_config(F101, 2, {0, 1, 2, 3}));
  const auto uc = circuits(u, 4);
  REQUIRE(uc.size() == 1);
  CHECK(uc[0].elements.size() == 4);

  CHECK(circuits(from_rows(F101, {{1, 0}, {0, 1}}), 2).empty());
}

TEST_CASE("fundamental circuit examples") {
  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  CHECK(fundamental_circuit(m, ElementSet{0, 1}, 2).elements == std::vector<std::size_t>{0, 1, 2});
  const auto m2 = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
  CHECK(fundamental_circuit(m2, ElementSet{0, 1, 2}, 3).elements == std::vector<std::size_t>{0, 1, 3});
  const auto u = Matroid::from_points(moment_curve_config(F101, 3, {0, 1, 2, 3, 4}));
  CHECK(fundamental_circuit(u, ElementSet{1, 2, 3, 4}, 0).elements.size() == 5);
}

TEST_CASE("is_Dt examples") {
  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  const auto cert = is_Dt(m, 2);
  REQUIRE(cert);
  CHECK(cert->part1 == ElementSet({0, 1, 2}));
  CHECK(cert->part2 == ElementSet({3}));
  CHECK(cert->r1 + cert->r2 == 3);

  for (std::size_t n = 2; n <= 5; ++n) {
    std::vector<Word> params(n + 2);
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = k;
    CHECK_FALSE(is_Dt(Matroid::from_points(moment_curve_config(F101, n, params)), n));
    params.pop_back();
    CHECK(is_Dt(Matroid::from_points(moment_curve_config(F101, n, params)), n));
  }

  Rng rng(1);
  const auto planted = Matroid::from_points(two_plane_config(F101, 3, 1, 1, 3, 3, rng));
  const auto pc = is_Dt(planted, 3);
  REQUIRE(pc);
  CHECK(pc->r1 == 2);
  CHECK(pc->r2 == 2);

  CHECK_THROWS(is_Dt(from_rows(F101, {{1, 0}}), 1));
  CHECK_THROWS(is_Dt(m, 0));
}

TEST_CASE("delete examples") {
  const auto u = Matroid::from_points(moment_curve_config(F101, 2, {0, 1, 2, 3}));
  const auto d = delete_element(u, 1);
  CHECK(d.size() == 3);
  CHECK(d.is_independent(d.ground()));
  CHECK(d.labels() == std::vector<std::size_t>{0, 2, 3});

  const auto m = from_rows(F101, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  const auto m2 = delete_element(m, 2);
  CHECK(m2.rank() == 2);
  CHECK(m2.is_independent(m2.ground()));
}

TEST_CASE("deletion statement verdicts") {
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<Word> params(n + 2);
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = 3 * k + 1;
    const auto check = check_deletion_theorem(Matroid::from_points(moment_curve_config(F101, n, params)), n);
    CHECK(check.verdict == DeletionVerdict::ConclusionUniform);
  }
  Rng rng(4);
  const auto planted = Matroid::from_points(two_plane_config(F101, 3, 1, 1, 3, 3, rng));
  CHECK(check_deletion_theorem(planted, 3).verdict == DeletionVerdict::HypothesisFails);
  CHECK(to_string(DeletionVerdict::Counterexample) == "COUNTEREXAMPLE");
  CHECK(to_string(DeletionVerdict::HypothesisFails) == "hypothesis_fails");
  CHECK(to_string(DeletionVerdict::ConclusionUniform) == "conclusion_uniform");
}

TEST_CASE("two points on each of n concurrent lines defeat the deletion statement") {
  // Not D_n, every deletion is D_n, yet 2n > n + 2 elements: the uniform
  // conclusion fails for n >= 3 over any field.
  for (Word p : {Word{2}, Word{3}, Word{101}, Word{32003}}) {
    const PrimeField f(p);
    for (std::size_t n = 3; n <= 5; ++n) {
      const auto m = Matroid::from_points(concurrent_lines_config(f, n));
      CHECK(m.size() == 2 * n);
      CHECK(m.rank() == n + 1);
      CHECK_FALSE(is_Dt(m, n));
      if (n == 3) CHECK_FALSE(dt_by_flats(m, n));
      for (std::size_t x = 0; x < m.size(); ++x) CHECK(is_Dt(delete_element(m, x), n));
      CHECK(check_deletion_theorem(m, n).verdict == DeletionVerdict::Counterexample);
    }
  }
  // n = 2 gives four points in general position: the statement holds there.
  const auto m2 = Matroid::from_points(concurrent_lines_config(F101, 2));
  CHECK(check_deletion_theorem(m2, 2).verdict == DeletionVerdict::ConclusionUniform);
}

TEST_CASE("circuit elimination") {
  Rng rng(8);
  CHECK(verify_circuit_elimination(random_linear(F101, 7, 3, rng)));
  CHECK(verify_circuit_elimination(Matroid::uniform(4, 2)));
  // Independent sets of a non-matroid whose circuits are {0,1} and {1,2} with {0,2} independent.
  const auto bad = Matroid::from_independent_sets(3, {{0, 2}, {1}}, AxiomCheck::Skip);
  CHECK_FALSE(verify_circuit_elimination(bad));
  CHECK_THROWS(Matroid::from_independent_sets(3, {{0, 2}, {1}}));
  CHECK_THROWS_AS(verify_circuit_elimination(random_linear(F101, 21, 3, rng)), BudgetExceeded);
}

TEST_CASE("explicit matroids match linear ones") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto lin = random_linear(PrimeField(3), gen::between(rng, 3, 8), gen::between(rng, 2, 4), rng);
    std::vector<std::vector<std::size_t>> bases;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << lin.size()); ++s) {
      const ElementSet e(s);
      if (e.size() == lin.rank() && lin.is_independent(e)) bases.push_back(e.elements());
    }
    const auto exp = Matroid::from_independent_sets(lin.size(), bases);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << lin.size()); ++s) REQUIRE(exp.rank(ElementSet(s)) == lin.rank(ElementSet(s)));
    REQUIRE(satisfies_rank_axioms(exp, rng));
    for (std::size_t t = 1; t <= lin.rank(); ++t) REQUIRE(is_Dt(exp, t).has_value() == is_Dt(lin, t).has_value());
  }
}

TEST_CASE("JSON matroids") {
  const auto exp = matroid_from_json(nlohmann::json::parse(R"({"ground": 3, "independent_sets": [[0,1],[0,2],[1,2]]})"));
  CHECK(exp.rank() == 2);
  CHECK(is_uniform(exp, 2));
  CHECK_THROWS_AS(matroid_from_json(nlohmann::json::parse(R"({"ground": 3})")), ParseError);
  CHECK_THROWS(matroid_from_json(nlohmann::json::parse(R"({"ground": 3, "independent_sets": [[0,1],[2]]})")));
  CHECK_NOTHROW(matroid_from_json(nlohmann::json::parse(R"({"ground": 3, "independent_sets": [[0,2],[1]]})"),
                                  AxiomCheck::Skip));
}

TEST_CASE("property: partition search agrees with the flat lattice and certificates are honest") {
  Rng rng(31);
  for (Word p : {Word{2}, Word{3}, Word{5}, Word{101}}) {
    const PrimeField f(p);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t dim = gen::between(rng, 2, 4);
      const auto m = random_linear(f, gen::between(rng, 2, 8), dim, rng);
      for (std::size_t t = 1; t <= dim; ++t) {
        const auto cert = is_Dt(m, t);
        REQUIRE(cert.has_value() == dt_by_flats(m, t));
        if (!cert) continue;
        REQUIRE_FALSE(cert->part1.empty());
        REQUIRE_FALSE(cert->part2.empty());
        REQUIRE((cert->part1 | cert->part2) == m.ground());
        REQUIRE((cert->part1 & cert->part2).empty());
        REQUIRE(cert->r1 == m.rank(cert->part1));
        REQUIRE(cert->r2 == m.rank(cert->part2));
        REQUIRE(cert->r1 + cert->r2 <= t + 1);
        const auto l1 = closure(m, cert->part1), l2 = closure(m, cert->part2);
        REQUIRE(m.ground().is_subset_of(l1 | l2));
        REQUIRE(m.rank(l1) == cert->r1);
        // Downward closure under deletion.
        if (m.size() >= 3) {
          for (std::size_t x = 0; x < m.size(); ++x) REQUIRE(is_Dt(delete_element(m, x), t));
        }
      }
    }
  }
}

TEST_CASE("property: D_n is invariant under permutation, rescaling and coordinate change") {
  Rng rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = gen::between(rng, 2, 4);
    const std::size_t size = n + 1 + gen::between(rng, 0, 4);
    PointConfig x = trial % 2 == 0 ? gen::nondegenerate(F101, n, size, rng)
                                   : two_plane_config(F101, n, n - 1, 0, size - 1, 1, rng);
    const bool base = is_Dt(Matroid::from_points(x), n).has_value();

    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    REQUIRE(is_Dt(Matroid::from_points(x.subset(order)), n).has_value() == base);

    Matrix rows = x.coordinate_matrix();
    for (Index r = 0; r < rows.rows(); ++r) {
      const Word s = 1 + gen::scalar(F101, rng) % 100;
      for (Index c = 0; c < rows.cols(); ++c) rows.set(r, c, F101.mul(s, rows(r, c)));
    }
    REQUIRE(is_Dt(Matroid::linear(rows), n).has_value() == base);

    const auto moved = apply_linear_map(x, random_invertible(F101, static_cast<Index>(n + 1), rng));
    REQUIRE(is_Dt(Matroid::from_points(moved), n).has_value() == base);
  }
}

TEST_CASE("property: fundamental circuits are circuits and the rank axioms hold") {
  Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = random_linear(PrimeField(5), gen::between(rng, 3, 8), gen::between(rng, 2, 4), rng);
    REQUIRE(satisfies_rank_axioms(m, rng));
    ElementSet basis;
    for (std::size_t x = 0; x < m.size(); ++x) {
      if (m.rank(basis.with(x)) > m.rank(basis)) basis = basis.with(x);
    }
    REQUIRE(basis.size() == m.rank());
    for (std::size_t x = 0; x < m.size(); ++x) {
      if (basis.contains(x)) continue;
      const auto c = ElementSet::from_indices(fundamental_circuit(m, basis, x).elements);
      REQUIRE(c.contains(x));
      REQUIRE(c.is_subset_of(basis.with(x)));
      REQUIRE_FALSE(m.is_independent(c));
      for (auto y : c.elements()) REQUIRE(m.is_independent(c.without(y)));
    }
    REQUIRE(verify_circuit_elimination(m));
  }
}

TEST_CASE("property: deletion statement on random and planted instances over large fields") {
  Rng rng(61);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = gen::between(rng, 1, 4);
    const std::size_t size = n + 3 + gen::between(rng, 0, 3);
    const Matroid m = trial % 3 == 0 && n >= 2
                          ? Matroid::from_points(two_plane_config(F101, n, 0, n - 1, 1, size - 1, rng))
                          : random_linear(PrimeField(trial % 2 ? 101 : 32003), size, n + 1, rng);
    if (m.rank() != n + 1) continue;
    bool all_deletions = true;
    for (std::size_t x = 0; x < m.size() && all_deletions; ++x) all_deletions = is_Dt(delete_element(m, x), n).has_value();
    if (all_deletions) REQUIRE(is_Dt(m, n));
    REQUIRE(check_deletion_theorem(m, n).verdict != DeletionVerdict::Counterexample);
  }
}

TEST_CASE("normalized covers are disjoint with a + b = t - 1") {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen::between(rng, 1, 4);
    const std::size_t a = gen::between(rng, 0, n - 1);
    const auto x = two_plane_config(F101, n, a, n - 1 - a, a + 1 + gen::between(rng, 0, a ? 2 : 0),
                                    n - a + gen::between(rng, 0, n - 1 - a ? 2 : 0), rng);
    const auto m = Matroid::from_points(x);
    const auto cert = is_Dt(m, n);
    REQUIRE(cert);
    const auto nc = normalize_cover(m, *cert, n);
    REQUIRE(nc.a + nc.b == n - 1);
    REQUIRE(nc.disjoint);
    REQUIRE(rank(nc.flat1) == static_cast<Index>(nc.a + 1));
    REQUIRE(rank(nc.flat2) == static_cast<Index>(nc.b + 1));
  }
}
