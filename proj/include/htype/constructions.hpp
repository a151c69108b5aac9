#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htype/lie_core.hpp"

namespace htype {

/// d real m x m matrices with G_a G_b + G_b G_a = -2 delta_ab I, each skew.
struct CliffordGenerators {
  int center_dim = 0;
  int module_dim = 0;
  std::vector<Matrix> generators;
};

/// Complex Heisenberg algebra of complex dimension 2n+1 in real form.
///
/// Real dimension 4n+2, basis ordered (x_1, ix_1, y_1, iy_1, ..., x_n, ix_n,
/// y_n, iy_n, z, iz), gram = I. Returned with its standard complex structure.
StructuredAlgebra heisenberg_complex(int n);

/// Real Heisenberg algebra of dimension 2n+1, basis (x_1, y_1, ..., x_n, y_n, z).
MetricLieAlgebra heisenberg_real(int n);

/// Abelian algebra R^dim with the given gram (identity when omitted).
MetricLieAlgebra abelian(int dim, std::optional<Matrix> gram = std::nullopt);

/// Generators built from left multiplication by imaginary units of C, H or O
/// (Cayley-Dickson), repeated block-diagonally to fill module_dim.
/// Supported: d = 1 with m even, d <= 3 with m % 4 == 0, d <= 7 with m % 8 == 0.
CliffordGenerators standard_clifford_generators(int center_dim, int module_dim);

/// Max over pairs of |G_a G_b + G_b G_a + 2 delta_ab I|, and the worst pair.
struct CliffordCheck {
  double relation_defect = 0.0;
  int a = -1;
  int b = -1;
  double skew_defect = 0.0;
  int skew_index = -1;
};
CliffordCheck check_clifford(const CliffordGenerators& gens, const Matrix& gram_module);

/// H-type algebra on v (dim m) + z (dim d) with <zeta_a, [u, v]> = <G_a u, v>,
/// zeta_a the gram_center-orthonormal frame of z. Identity grams when omitted.
/// Skewness is taken relative to gram_module.
MetricLieAlgebra from_clifford_representation(const CliffordGenerators& gens,
                                              std::optional<Matrix> gram_center = std::nullopt,
                                              std::optional<Matrix> gram_module = std::nullopt,
                                              double tol = kDefaultTolerance);

/// Block-diagonal direct sum. Complex structures must be present on both or neither.
StructuredAlgebra direct_sum(const StructuredAlgebra& a, const StructuredAlgebra& b);

struct Scrambled {
  StructuredAlgebra value;
  /// New basis vectors in old coordinates: old = transform * new.
  Matrix transform;
};

/// Hides the basis behind a seeded random gram-orthogonal transform that
/// commutes with the complex structure when one is present.
Scrambled scramble(const StructuredAlgebra& input, std::uint64_t seed);

/// Re-expresses the algebra in the basis given by the columns of `transform`.
StructuredAlgebra change_basis(const StructuredAlgebra& input, const Matrix& transform);

}  // namespace htype
