#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htype/errors.hpp"
#include "htype/lie_core.hpp"

namespace htype {

/// Tolerance for inputs that went through a random orthogonal change of basis.
inline constexpr double kDerivedTolerance = 1e-7;

enum class VerdictStatus { h_type, not_h_type, degenerate };

std::string_view to_string(VerdictStatus status);

struct HTypeVerdict {
  struct ContainmentWitness {
    Vector u;
    Vector v;
    double off_center_norm = 0.0;  ///< |component of [u, v] orthogonal to z|
  };
  struct IsometryWitness {
    Vector z;
    double defect = 0.0;  ///< |J_z^T J_z - I|
  };

  VerdictStatus status = VerdictStatus::degenerate;
  double bracket_containment_defect = 0.0;
  double polarized_isometry_defect = 0.0;
  int center_dim = 0;
  int complement_dim = 0;
  std::optional<ContainmentWitness> containment_witness;
  std::optional<IsometryWitness> isometry_witness;
  double tolerance_used = kDefaultTolerance;
};

enum class ObstructionKind { center_dim, isometry_failure, containment_failure };

std::string_view to_string(ObstructionKind kind);

/// Unit, complex-orthogonal central z, w with J_z J_w = 0 when kind is
/// center_dim: two isometries cannot multiply to zero.
struct ObstructionWitness {
  Vector z;
  Vector w;
  double product_norm = 0.0;     ///< |J_z J_w|
  double isometry_defect = 0.0;  ///< max(|J_z^T J_z - I|, |J_w^T J_w - I|)
  ObstructionKind kind = ObstructionKind::center_dim;
};

/// How a unit vector is picked from a subspace: every standard coordinate
/// vector is projected onto it and one projection is normalized.
enum class PivotRule {
  largest_projection,  ///< largest projection, first index on ties
  first_coordinate,    ///< first index whose projection is at least half the largest
  last_coordinate,     ///< largest projection, last index on ties
};

std::string_view to_string(PivotRule rule);
PivotRule parse_pivot_rule(std::string_view name);

struct IsomorphismResiduals {
  double bracket = 0.0;            ///< max_{a<b} |phi [e_a, e_b] - [phi e_a, phi e_b]_std|
  double metric = 0.0;             ///< |S^T G S - I|, S = phi^{-1}
  double complex_structure = 0.0;  ///< |phi C - C_std phi|

  double max() const { return std::max({bracket, metric, complex_structure}); }
};

struct ClassificationResult {
  int n = 0;
  PivotRule pivot = PivotRule::largest_projection;
  /// Columns (x_1, ix_1, y_1, iy_1, ..., z, iz) in input coordinates.
  Matrix standard_basis;
  /// Input coordinates -> heisenberg_complex(n) coordinates.
  Matrix iso_matrix;
  IsomorphismResiduals residuals;
  double condition_number = 0.0;
  /// Gram defect of {x_k, ix_k, y_k, iy_k : k <= m} after each step m.
  std::vector<double> step_orthonormality;
  double tolerance_used = kDefaultTolerance;
};

/// The constructed basis did not certify an isometric isomorphism.
class ClassificationFailure : public Error {
 public:
  ClassificationFailure(const std::string& what, IsomorphismResiduals residuals)
      : Error(what), residuals_(residuals) {}
  const IsomorphismResiduals& residuals() const noexcept { return residuals_; }

 private:
  IsomorphismResiduals residuals_;
};

HTypeVerdict verify_h_type(const MetricLieAlgebra& algebra, double tol = kDefaultTolerance);

/// Real dimension of the center over 2. Throws StructuralError when i does
/// not preserve the center.
int center_complex_dimension(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                             double tol = kDefaultTolerance);

ObstructionWitness find_obstruction(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                    double tol = kDefaultTolerance,
                                    PivotRule pivot = PivotRule::largest_projection);

/// Builds the orthonormal basis x_m, ix_m, y_m = J_z x_m, iy_m and the
/// isomorphism onto heisenberg_complex(n). Throws StructuralError or
/// ClassificationFailure.
ClassificationResult build_standard_basis(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                          double tol = kDefaultTolerance,
                                          PivotRule pivot = PivotRule::largest_projection);

struct Classification {
  enum class Kind { classification, obstruction, verdict };

  HTypeVerdict verdict;
  std::optional<ClassificationResult> result;
  std::optional<ObstructionWitness> obstruction;
  std::string diagnostic;

  Kind kind() const {
    if (result) return Kind::classification;
    if (obstruction) return Kind::obstruction;
    return Kind::verdict;
  }
};

/// validate -> verify_h_type -> center_complex_dimension -> build_standard_basis
/// or find_obstruction. Errors carry the name of the stage that raised them.
Classification classify(const MetricLieAlgebra& algebra, const std::optional<ComplexStructure>& complex,
                        double tol = kDefaultTolerance, PivotRule pivot = PivotRule::largest_projection);

/// Recomputes the residuals of a certificate from the algebra and iso_matrix alone.
std::vector<Defect> verify_isomorphism(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                       const ClassificationResult& result, double tol = kDefaultTolerance);

}  // namespace htype
