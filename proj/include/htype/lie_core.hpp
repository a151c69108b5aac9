#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace htype {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Rank and kernel decisions treat singular values at or below
/// tol * sigma_max as zero.
inline constexpr double kDefaultTolerance = 1e-9;

/// [e_i, e_j] += c * e_k, stored for i < j only.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;

  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

/// Change of basis between ambient coordinates and a gram-orthonormal frame,
/// derived from the Cholesky factor gram = L L^T.
struct OrthonormalFrame {
  Matrix to_frame;    ///< L^T: ambient coordinates -> frame coordinates
  Matrix from_frame;  ///< L^{-T}: columns are a gram-orthonormal basis
};

/// A finite-dimensional real Lie algebra with an inner product.
///
/// Structure constants are stored sparse with i < j and the bracket is
/// extended antisymmetrically. The Jacobi identity and positivity of the
/// gram matrix are not enforced here; `measure_algebra` reports them.
class MetricLieAlgebra {
 public:
  MetricLieAlgebra() = default;
  MetricLieAlgebra(int dim, std::vector<StructureConstant> constants, Matrix gram);

  int dim() const noexcept { return dim_; }
  std::span<const StructureConstant> structure_constants() const noexcept { return constants_; }
  const Matrix& gram() const noexcept { return gram_; }

  Vector bracket(const Vector& x, const Vector& y) const;

  /// Matrix of ad_x : y -> [x, y].
  Matrix adjoint(const Vector& x) const;

  /// n^2 x n matrix K with K x = ([x, e_0]; ...; [x, e_{n-1}]).
  Matrix stacked_adjoint() const;

  double inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;

  /// Throws InputError when the gram matrix is not positive definite.
  const OrthonormalFrame& frame() const;
  bool has_frame() const noexcept { return frame_.has_value(); }

  /// Largest singular value of the stacked adjoint; the scale against which
  /// relative kernel thresholds are taken. Zero for abelian algebras.
  double bracket_scale() const noexcept { return bracket_scale_; }

  /// Dense tensor: entry [a](k, b) is the e_k coefficient of [e_a, e_b].
  std::vector<Matrix> dense_brackets() const;

 private:
  void check_vector(const Vector& x) const;

  int dim_ = 0;
  std::vector<StructureConstant> constants_;
  Matrix gram_ = Matrix(0, 0);
  std::optional<OrthonormalFrame> frame_;
  double bracket_scale_ = 0.0;
};

/// Real-linear operator realizing multiplication by i.
struct ComplexStructure {
  Matrix matrix;
};

/// A metric Lie algebra together with an optional complex structure.
struct StructuredAlgebra {
  MetricLieAlgebra algebra;
  std::optional<ComplexStructure> complex;
};

/// Columns of `basis` span the subspace.
struct Subspace {
  Matrix basis;
  bool orthonormal = false;

  int dim() const noexcept { return static_cast<int>(basis.cols()); }
};

struct Defect {
  std::string name;
  double magnitude = 0.0;
};

struct AlgebraDefectProfile {
  double jacobi = 0.0;               ///< max_{i<j<k} |Jacobiator(e_i, e_j, e_k)|
  double gram_symmetry = 0.0;        ///< max |G_ij - G_ji|
  double gram_min_eigenvalue = 0.0;  ///< of the symmetric part of G
};

struct ComplexStructureDefectProfile {
  double square = 0.0;     ///< max |(C^2 + I)_ab|
  double bracket = 0.0;    ///< max_{a,b} |[C e_a, e_b] - C [e_a, e_b]|
  double hermitian = 0.0;  ///< max |(C^T G C - G)_ab|
};

AlgebraDefectProfile measure_algebra(const MetricLieAlgebra& algebra);

/// Defects above `tol`; an empty list means the algebra is valid. The
/// positive-definiteness defect is reported as tol - lambda_min when
/// lambda_min <= tol.
std::vector<Defect> validate_algebra(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

ComplexStructureDefectProfile measure_complex_structure(const MetricLieAlgebra& algebra,
                                                        const ComplexStructure& complex);

std::vector<Defect> validate_complex_structure(const MetricLieAlgebra& algebra,
                                               const ComplexStructure& complex,
                                               double tol = kDefaultTolerance);

/// Gram-orthonormal basis of the center, the kernel of the stacked adjoint.
Subspace center(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

/// Gram-orthonormal basis of the gram-orthogonal complement of `subspace`.
Subspace orthogonal_complement(const MetricLieAlgebra& algebra, const Subspace& subspace);

/// Smallest s with C^{s+1} = 0 in the lower central series, or nullopt when
/// the series stabilizes at a nonzero ideal.
std::optional<int> nilpotency_step(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

/// Modified Gram-Schmidt under `gram` with one re-orthogonalization pass.
/// Vectors whose residual falls below tol * (original norm) are dropped.
Matrix gram_schmidt(const Matrix& gram, const Matrix& vectors, double tol = kDefaultTolerance);

}  // namespace htype
