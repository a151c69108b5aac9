#pragma once

#include <memory>
#include <random>

#include "htype/lie_core.hpp"

namespace htype {

/// The center z, its complement v, and the gram matrix they are orthonormal in.
struct Splitting {
  Matrix gram;
  Subspace center;
  Subspace complement;

  int center_dim() const noexcept { return center.dim(); }
  int complement_dim() const noexcept { return complement.dim(); }
};

std::shared_ptr<const Splitting> split(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

/// J_z on v, in the orthonormal basis {u_a} of the splitting.
///
/// `matrix(a, b) = <J_z u_a, u_b>`, the bilinear-form layout. Use `action()`
/// for the operator in column convention (column a holds the coordinates of
/// J_z u_a) when composing operators.
struct JOperator {
  Vector z;
  Matrix matrix;
  std::shared_ptr<const Splitting> frame;

  Matrix action() const { return matrix.transpose(); }

  /// n x n matrix of J_z extended by zero on the center, in ambient coordinates.
  Matrix ambient() const;
};

/// Matrix norm used by every defect below.
inline constexpr const char* kDefectNorm = "frobenius";

/// Kaplan-operator calculus over one algebra. The splitting is computed once
/// on construction; every method is const and thread-safe.
class JCalculus {
 public:
  explicit JCalculus(MetricLieAlgebra algebra, double tol = kDefaultTolerance);

  const MetricLieAlgebra& algebra() const noexcept { return algebra_; }
  const Splitting& splitting() const noexcept { return *split_; }
  std::shared_ptr<const Splitting> shared_splitting() const noexcept { return split_; }
  double tolerance() const noexcept { return tol_; }

  /// Solves <J_z u, v> = <z, [u, v]> through the adjoint and a gram solve.
  /// Throws NotCentralError or DegenerateInputError.
  JOperator compute_j(const Vector& z) const;

  /// B_ab = <z, [u_a, u_b]> assembled straight from the structure constants.
  Matrix j_bilinear_form(const Vector& z) const;

  /// |J_z J_w + J_w J_z + 2 <z, w> I|.
  double clifford_defect(const Vector& z, const Vector& w) const;

  struct ConjugateLinearity {
    double z_linearity = 0.0;  ///< |J_{iz} - i J_z|
    double u_antilinearity = 0.0;  ///< |J_z i + i J_z|
  };

  /// Throws StructuralError when i does not preserve v.
  ConjugateLinearity conjugate_linearity_defect(const ComplexStructure& complex, const Vector& z) const;

  /// |J_z^T J_z - I| for unit z; non-unit z is rejected.
  double isometry_defect(const Vector& z) const;

  struct PolarizedIsometry {
    double defect = 0.0;
    int a = -1;  ///< worst center-basis pair
    int b = -1;
  };

  /// max over center-basis pairs of |J_a^T J_b + J_b^T J_a - 2 delta_ab I|.
  /// Vacuously zero when the center or v is trivial.
  PolarizedIsometry polarized_isometry() const;
  double polarized_isometry_defect() const { return polarized_isometry().defect; }

  /// Matrix of i restricted to v (column convention). Throws StructuralError
  /// when i v is not contained in v.
  Matrix complex_on_complement(const ComplexStructure& complex) const;

  /// Uniformly distributed unit vector of the center.
  Vector random_unit_central(std::mt19937_64& rng) const;

 private:
  void require_central(const Vector& z) const;

  MetricLieAlgebra algebra_;
  double tol_;
  std::shared_ptr<const Splitting> split_;
  Eigen::LLT<Matrix> gram_solver_;
  Matrix stacked_adjoint_;
};

JOperator compute_j(const MetricLieAlgebra& algebra, const Vector& z, double tol = kDefaultTolerance);
Matrix j_bilinear_form(const MetricLieAlgebra& algebra, const Vector& z, double tol = kDefaultTolerance);
double clifford_defect(const MetricLieAlgebra& algebra, const Vector& z, const Vector& w,
                       double tol = kDefaultTolerance);
JCalculus::ConjugateLinearity conjugate_linearity_defect(const MetricLieAlgebra& algebra,
                                                         const ComplexStructure& complex, const Vector& z,
                                                         double tol = kDefaultTolerance);
double isometry_defect(const MetricLieAlgebra& algebra, const Vector& z, double tol = kDefaultTolerance);
double polarized_isometry_defect(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

}  // namespace htype
