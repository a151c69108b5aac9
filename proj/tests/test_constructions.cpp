#include <doctest.h>

#include <map>
#include <set>
#include <tuple>

#include "htype/classifier.hpp"
#include "htype/constructions.hpp"
#include "htype/errors.hpp"
#include "htype/j_calculus.hpp"
#include "oracles.hpp"

using namespace htype;
using oracle::unit;

namespace {

using ConstantKey = std::tuple<int, int, int>;

std::map<ConstantKey, double> constant_map(const MetricLieAlgebra& a) {
  std::map<ConstantKey, double> out;
  for (const auto& e : a.structure_constants()) out[{e.i, e.j, e.k}] += e.c;
  return out;
}

double tensor_distance(const MetricLieAlgebra& a, const MetricLieAlgebra& b) {
  REQUIRE(a.dim() == b.dim());
  const auto ta = oracle::tensor(a), tb = oracle::tensor(b);
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k) worst = std::max(worst, std::abs(ta[i][j][k] - tb[i][j][k]));
  return worst;
}

}  // namespace

TEST_CASE("heisenberg_complex has the expected structure constants") {
  for (int n = 1; n <= 3; ++n) {
    const auto h = heisenberg_complex(n);
    CHECK(h.algebra.dim() == 4 * n + 2);
    CHECK(h.algebra.gram() == Matrix::Identity(4 * n + 2, 4 * n + 2));
    std::map<ConstantKey, double> expected;
    for (int k = 0; k < n; ++k) {
      expected[{oracle::x(k), oracle::y(k), oracle::z(n)}] = 1.0;
      expected[{oracle::x(k), oracle::iy(k), oracle::iz(n)}] = 1.0;
      expected[{oracle::ix(k), oracle::y(k), oracle::iz(n)}] = 1.0;
      expected[{oracle::ix(k), oracle::iy(k), oracle::z(n)}] = -1.0;
    }
    CHECK(constant_map(h.algebra) == expected);
    const Matrix& c = h.complex->matrix;
    CHECK((c * c + Matrix::Identity(4 * n + 2, 4 * n + 2)).norm() == 0.0);
    CHECK(validate_complex_structure(h.algebra, *h.complex).empty());
    CHECK(oracle::jacobi_defect(h.algebra.dim(), {h.algebra.structure_constants().begin(),
                                                   h.algebra.structure_constants().end()}) == 0.0);
  }
  CHECK_THROWS_AS(heisenberg_complex(0), InputError);
}

TEST_CASE("heisenberg_complex bracket is complex bilinear") {
  const auto h = heisenberg_complex(2);
  const Matrix& c = h.complex->matrix;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = oracle::random_vector(10, rng), v = oracle::random_vector(10, rng);
    CHECK((h.algebra.bracket(c * u, v) - c * h.algebra.bracket(u, v)).norm() < 1e-12);
  }
}

TEST_CASE("heisenberg_real") {
  const auto h = heisenberg_real(2);
  CHECK(h.dim() == 5);
  const std::map<ConstantKey, double> expected{{{0, 1, 4}, 1.0}, {{2, 3, 4}, 1.0}};
  CHECK(constant_map(h) == expected);
  CHECK(verify_h_type(h).status == VerdictStatus::h_type);
  CHECK_THROWS_AS(heisenberg_real(0), InputError);
}

TEST_CASE("one-generator Clifford data gives the real Heisenberg algebra") {
  for (int n : {1, 2}) {
    const auto c = from_clifford_representation(standard_clifford_generators(1, 2 * n));
    CHECK(tensor_distance(c, heisenberg_real(n)) == 0.0);
  }
}

TEST_CASE("standard Clifford generators satisfy the relations") {
  for (auto [d, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 6}, {2, 4}, {3, 4}, {3, 8}, {5, 8}, {7, 8}, {7, 16}}) {
    const auto gens = standard_clifford_generators(d, m);
    CHECK(static_cast<int>(gens.generators.size()) == d);
    const auto check = check_clifford(gens, Matrix::Identity(m, m));
    CHECK(check.relation_defect == 0.0);
    CHECK(check.skew_defect == 0.0);
  }
  // Quaternion units against a direct quaternion product.
  const auto gens = standard_clifford_generators(3, 4);
  for (int a = 0; a < 3; ++a) CHECK((gens.generators[a] - oracle::quaternion_left(a + 1)).norm() == 0.0);
  CHECK_THROWS_AS(standard_clifford_generators(8, 16), InputError);
  CHECK_THROWS_AS(standard_clifford_generators(3, 6), InputError);
  CHECK_THROWS_AS(standard_clifford_generators(0, 2), InputError);
}

TEST_CASE("Clifford constructions are H-type") {
  for (auto [d, m] : std::vector<std::pair<int, int>>{{1, 4}, {2, 4}, {3, 4}, {3, 8}, {7, 8}}) {
    const auto a = from_clifford_representation(standard_clifford_generators(d, m));
    CHECK(a.dim() == d + m);
    const auto v = verify_h_type(a);
    CHECK(v.status == VerdictStatus::h_type);
    CHECK(v.center_dim == d);
    CHECK(v.complement_dim == m);
    CHECK(nilpotency_step(a) == 2);
  }
}

TEST_CASE("Clifford round trip through J operators") {
  for (auto [d, m] : std::vector<std::pair<int, int>>{{1, 4}, {3, 4}, {7, 8}}) {
    const auto a = from_clifford_representation(standard_clifford_generators(d, m));
    const JCalculus calc(a);
    CliffordGenerators back{d, m, {}};
    for (int c = 0; c < d; ++c) back.generators.push_back(calc.compute_j(unit(m + d, m + c)).ambient().topLeftCorner(m, m));
    const auto rebuilt = from_clifford_representation(back, std::nullopt, std::nullopt, 1e-9);
    CHECK(tensor_distance(a, rebuilt) < 1e-12);
  }
}

TEST_CASE("Clifford data with non-identity grams") {
  Matrix gz(3, 3);
  gz << 2.0, 0.5, 0.0, 0.5, 1.5, 0.2, 0.0, 0.2, 1.0;
  const auto a = from_clifford_representation(standard_clifford_generators(3, 4), gz);
  CHECK(verify_h_type(a).status == VerdictStatus::h_type);
  CHECK((a.gram().bottomRightCorner(3, 3) - gz).norm() == 0.0);

  Matrix gv = Matrix::Identity(4, 4);
  gv(0, 0) = 2.0;
  CHECK_THROWS_AS(from_clifford_representation(standard_clifford_generators(3, 4), std::nullopt, gv), InputError);
}

TEST_CASE("bad Clifford data is rejected with the offending pair") {
  auto gens = standard_clifford_generators(3, 4);
  gens.generators[2] = gens.generators[1];
  try {
    from_clifford_representation(gens);
    FAIL("expected rejection");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("pair (1, 2)") != std::string::npos);
  }

  auto sym = standard_clifford_generators(1, 2);
  sym.generators[0](0, 1) = 1.0;
  CHECK_THROWS_WITH_AS(from_clifford_representation(sym), doctest::Contains("not skew"), InputError);

  auto scaled = standard_clifford_generators(1, 2);
  scaled.generators[0] *= 2.0;
  CHECK_THROWS_AS(from_clifford_representation(scaled), InputError);

  auto wrong_count = standard_clifford_generators(2, 4);
  wrong_count.center_dim = 3;
  CHECK_THROWS_AS(from_clifford_representation(wrong_count), InputError);
}

TEST_CASE("direct sums") {
  const auto h = heisenberg_complex(1);
  const auto s = direct_sum(h, h);
  CHECK(s.algebra.dim() == 12);
  REQUIRE(s.complex);
  CHECK(s.complex->matrix.topLeftCorner(6, 6) == h.complex->matrix);
  CHECK(s.complex->matrix.bottomRightCorner(6, 6) == h.complex->matrix);
  CHECK(s.complex->matrix.topRightCorner(6, 6).norm() == 0.0);
  CHECK(center(s.algebra).dim() == 4);
  CHECK(validate_algebra(s.algebra).empty());
  // Brackets across summands vanish.
  for (int i = 0; i < 6; ++i)
    for (int j = 6; j < 12; ++j) CHECK(s.algebra.bracket(unit(12, i), unit(12, j)).norm() == 0.0);

  const auto mixed = direct_sum(h, heisenberg_complex(2));
  CHECK(mixed.algebra.dim() == 16);
  CHECK(center(mixed.algebra).dim() == 4);

  CHECK_THROWS_AS(direct_sum(h, {heisenberg_real(1), std::nullopt}), InputError);

  const StructuredAlgebra empty{abelian(0), ComplexStructure{Matrix(0, 0)}};
  const auto same = direct_sum(h, empty);
  CHECK(tensor_distance(same.algebra, h.algebra) == 0.0);
  CHECK(same.complex->matrix == h.complex->matrix);
}

TEST_CASE("scramble is deterministic and structure preserving") {
  const auto h = heisenberg_complex(2);
  const auto a = scramble(h, 7), b = scramble(h, 7), c = scramble(h, 8);
  CHECK(a.transform == b.transform);
  CHECK(a.value.algebra.structure_constants().size() == b.value.algebra.structure_constants().size());
  CHECK((a.transform - c.transform).norm() > 1e-3);

  const Matrix& t = a.transform;
  CHECK((t.transpose() * t - Matrix::Identity(10, 10)).norm() < 1e-12);
  CHECK((t * h.complex->matrix - h.complex->matrix * t).norm() < 1e-12);
  CHECK((a.value.complex->matrix - h.complex->matrix).norm() < 1e-12);
  CHECK(validate_algebra(a.value.algebra, 1e-9).empty());
  CHECK(validate_complex_structure(a.value.algebra, *a.value.complex, 1e-9).empty());
  // The scrambled constants are dense, not a relabeling.
  CHECK(a.value.algebra.structure_constants().size() > h.algebra.structure_constants().size());
}

TEST_CASE("scramble preserves the invariants") {
  std::vector<StructuredAlgebra> inputs{heisenberg_complex(1), heisenberg_complex(3),
                                        {heisenberg_real(2), std::nullopt},
                                        {from_clifford_representation(standard_clifford_generators(3, 8)), std::nullopt},
                                        direct_sum(heisenberg_complex(1), heisenberg_complex(1))};
  for (const auto& input : inputs) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto s = scramble(input, seed);
      const auto before = verify_h_type(input.algebra), after = verify_h_type(s.value.algebra, kDerivedTolerance);
      CHECK(before.status == after.status);
      CHECK(before.center_dim == after.center_dim);
      CHECK(nilpotency_step(input.algebra) == nilpotency_step(s.value.algebra, kDerivedTolerance));
      if (before.status == VerdictStatus::h_type) CHECK(after.polarized_isometry_defect < 1e-9);
      else CHECK(after.polarized_isometry_defect > 0.1);
      // Brackets transform covariantly: T [u, v]' = [T u, T v].
      std::mt19937_64 rng(seed);
      const int n = input.algebra.dim();
      const Vector u = oracle::random_vector(n, rng), v = oracle::random_vector(n, rng);
      CHECK((s.transform * s.value.algebra.bracket(u, v) -
             input.algebra.bracket(s.transform * u, s.transform * v)).norm() < 1e-10);
    }
  }
}

TEST_CASE("scramble respects a weighted gram") {
  Matrix gz(3, 3);
  gz << 2.0, 0.5, 0.0, 0.5, 1.5, 0.2, 0.0, 0.2, 1.0;
  const StructuredAlgebra input{from_clifford_representation(standard_clifford_generators(3, 4), gz), std::nullopt};
  const auto s = scramble(input, 11);
  const Matrix& g = input.algebra.gram();
  CHECK((s.transform.transpose() * g * s.transform - g).norm() < 1e-12);
  CHECK((s.value.algebra.gram() - g).norm() < 1e-12);
  CHECK(verify_h_type(s.value.algebra, kDerivedTolerance).status == VerdictStatus::h_type);
}

TEST_CASE("change_basis by a permutation relabels constants") {
  const auto h = heisenberg_real(1);
  Matrix p = Matrix::Zero(3, 3);
  p(1, 0) = 1.0;  // new e0 = old y
  p(0, 1) = 1.0;  // new e1 = old x
  p(2, 2) = 1.0;
  const auto out = change_basis({h, std::nullopt}, p);
  const std::map<ConstantKey, double> expected{{{0, 1, 2}, -1.0}};
  CHECK(constant_map(out.algebra) == expected);
  CHECK_THROWS_AS(change_basis({h, std::nullopt}, Matrix::Identity(2, 2)), InputError);
}
