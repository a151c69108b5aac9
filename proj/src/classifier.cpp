#include "htype/classifier.hpp"

#include <cmath>
#include <limits>

#include "htype/constructions.hpp"
#include "htype/j_calculus.hpp"

namespace htype {

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::h_type:
      return "h_type";
    case VerdictStatus::not_h_type:
      return "not_h_type";
    case VerdictStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

std::string_view to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::center_dim:
      return "center_dim";
    case ObstructionKind::isometry_failure:
      return "isometry_failure";
    case ObstructionKind::containment_failure:
      return "containment_failure";
  }
  return "unknown";
}

std::string_view to_string(PivotRule rule) {
  switch (rule) {
    case PivotRule::largest_projection:
      return "largest-projection";
    case PivotRule::first_coordinate:
      return "first-coordinate";
    case PivotRule::last_coordinate:
      return "last-coordinate";
  }
  return "unknown";
}

PivotRule parse_pivot_rule(std::string_view name) {
  for (PivotRule rule :
       {PivotRule::largest_projection, PivotRule::first_coordinate, PivotRule::last_coordinate}) {
    if (to_string(rule) == name) return rule;
  }
  throw InputError("unknown pivot rule '" + std::string(name) + "'");
}

namespace {

// Unit vector in span(space) gram-orthogonal to `taken`; both bases are
// gram-orthonormal and `taken` lies in span(space).
Vector pivot_vector(const Matrix& g, const Matrix& space, const Matrix& taken, PivotRule rule) {
  const Eigen::Index n = g.rows();
  Matrix proj = space * (space.transpose() * g);
  if (taken.cols() > 0) proj -= taken * (taken.transpose() * g);

  const Vector norms = (proj.transpose() * g * proj).diagonal().cwiseMax(0.0).cwiseSqrt();
  const double largest = norms.maxCoeff();
  if (!(largest > 0.0)) throw StructuralError("no direction left to pivot on");

  Eigen::Index pick = -1;
  switch (rule) {
    case PivotRule::largest_projection:
      for (Eigen::Index i = 0; i < n && pick < 0; ++i) {
        if (norms[i] >= largest * (1.0 - 1e-12)) pick = i;
      }
      break;
    case PivotRule::first_coordinate:
      for (Eigen::Index i = 0; i < n && pick < 0; ++i) {
        if (norms[i] >= 0.5 * largest) pick = i;
      }
      break;
    case PivotRule::last_coordinate:
      for (Eigen::Index i = n - 1; i >= 0 && pick < 0; --i) {
        if (norms[i] >= largest * (1.0 - 1e-12)) pick = i;
      }
      break;
  }

  Vector v = proj.col(pick);
  v = space * (space.transpose() * (g * v));
  if (taken.cols() > 0) v -= taken * (taken.transpose() * (g * v));
  return v / std::sqrt(v.dot(g * v));
}

void append_column(Matrix& m, const Vector& v) {
  m.conservativeResize(Eigen::NoChange, m.cols() + 1);
  m.col(m.cols() - 1) = v;
}

int complex_center_dim(const JCalculus& calc, const ComplexStructure& complex, double tol) {
  const MetricLieAlgebra& alg = calc.algebra();
  if (complex.matrix.rows() != alg.dim() || complex.matrix.cols() != alg.dim()) {
    throw InputError("complex structure has the wrong shape");
  }
  const Matrix& z = calc.splitting().center.basis;
  const Matrix image = complex.matrix * z;
  const double residual = (image - z * (z.transpose() * alg.gram() * image)).norm();
  if (residual > tol * std::max(1.0, image.norm())) {
    throw StructuralError("complex structure does not preserve center (residual " + std::to_string(residual) + ")");
  }
  if (z.cols() % 2 != 0) {
    throw StructuralError("complex structure does not preserve center: odd real center dimension " +
                          std::to_string(z.cols()));
  }
  return static_cast<int>(z.cols() / 2);
}

HTypeVerdict::ContainmentWitness worst_containment(const JCalculus& calc) {
  const MetricLieAlgebra& alg = calc.algebra();
  const Matrix& g = alg.gram();
  const Matrix& z = calc.splitting().center.basis;
  const Matrix& v = calc.splitting().complement.basis;
  HTypeVerdict::ContainmentWitness worst{Vector(), Vector(), -1.0};
  for (Eigen::Index a = 0; a < v.cols(); ++a) {
    for (Eigen::Index b = a + 1; b < v.cols(); ++b) {
      Vector w = alg.bracket(v.col(a), v.col(b));
      w -= z * (z.transpose() * (g * w));
      const double off = std::sqrt(std::max(0.0, w.dot(g * w)));
      if (off > worst.off_center_norm) worst = {v.col(a), v.col(b), off};
    }
  }
  if (worst.off_center_norm < 0.0) worst.off_center_norm = 0.0;
  return worst;
}

template <class F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  }
}

IsomorphismResiduals residuals_for(const MetricLieAlgebra& alg, const ComplexStructure& complex,
                                   const StructuredAlgebra& standard, const Matrix& basis, const Matrix& iso) {
  const int dim = alg.dim();
  IsomorphismResiduals r;
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const Vector lhs = iso * alg.bracket(Vector::Unit(dim, a), Vector::Unit(dim, b));
      const Vector rhs = standard.algebra.bracket(iso.col(a), iso.col(b));
      r.bracket = std::max(r.bracket, (lhs - rhs).norm());
    }
  }
  r.metric = (basis.transpose() * alg.gram() * basis - Matrix::Identity(dim, dim)).norm();
  r.complex_structure = (iso * complex.matrix - standard.complex->matrix * iso).norm();
  return r;
}

}  // namespace

HTypeVerdict verify_h_type(const MetricLieAlgebra& algebra, double tol) {
  HTypeVerdict verdict;
  verdict.tolerance_used = tol;
  if (algebra.dim() == 0) return verdict;

  const JCalculus calc(algebra, tol);
  const Splitting& sp = calc.splitting();
  verdict.center_dim = sp.center_dim();
  verdict.complement_dim = sp.complement_dim();
  if (sp.complement_dim() == 0) {
    verdict.status = VerdictStatus::degenerate;
    return verdict;
  }

  const auto containment = worst_containment(calc);
  verdict.bracket_containment_defect = containment.off_center_norm;

  const auto polarized = calc.polarized_isometry();
  verdict.polarized_isometry_defect = polarized.defect;

  const bool contained = containment.off_center_norm <= tol;
  const bool isometric = polarized.defect <= tol;
  if (sp.center_dim() > 0 && contained && isometric) {
    verdict.status = VerdictStatus::h_type;
    return verdict;
  }

  verdict.status = VerdictStatus::not_h_type;
  if (!contained) verdict.containment_witness = containment;
  if (!isometric && polarized.a >= 0) {
    const Matrix& c = sp.center.basis;
    std::vector<Vector> candidates;
    if (polarized.a == polarized.b) {
      candidates.push_back(c.col(polarized.a));
    } else {
      candidates.push_back((c.col(polarized.a) + c.col(polarized.b)) / std::sqrt(2.0));
      candidates.push_back((c.col(polarized.a) - c.col(polarized.b)) / std::sqrt(2.0));
    }
    for (const Vector& z : candidates) {
      const double d = calc.isometry_defect(z);
      if (!verdict.isometry_witness || d > verdict.isometry_witness->defect) {
        verdict.isometry_witness = HTypeVerdict::IsometryWitness{z, d};
      }
    }
  }
  return verdict;
}

int center_complex_dimension(const MetricLieAlgebra& algebra, const ComplexStructure& complex, double tol) {
  return complex_center_dim(JCalculus(algebra, tol), complex, tol);
}

ObstructionWitness find_obstruction(const MetricLieAlgebra& algebra, const ComplexStructure& complex, double tol,
                                    PivotRule pivot) {
  const JCalculus calc(algebra, tol);
  const int cdim = complex_center_dim(calc, complex, tol);
  if (cdim < 2) {
    throw PreconditionError("find_obstruction needs center of complex dimension >= 2, got " + std::to_string(cdim));
  }
  const Matrix& g = algebra.gram();
  const Matrix& c = calc.splitting().center.basis;

  ObstructionWitness out;
  out.z = pivot_vector(g, c, Matrix(algebra.dim(), 0), pivot);
  Matrix taken(algebra.dim(), 2);
  taken.col(0) = out.z;
  taken.col(1) = complex.matrix * out.z;
  out.w = pivot_vector(g, c, taken, pivot);

  const Matrix jz = calc.compute_j(out.z).action();
  const Matrix jw = calc.compute_j(out.w).action();
  out.product_norm = (jz * jw).norm();
  const Matrix eye = Matrix::Identity(jz.rows(), jz.cols());
  out.isometry_defect = std::max((jz.transpose() * jz - eye).norm(), (jw.transpose() * jw - eye).norm());

  if (worst_containment(calc).off_center_norm > tol) {
    out.kind = ObstructionKind::containment_failure;
  } else if (out.product_norm <= tol) {
    out.kind = ObstructionKind::center_dim;
  } else {
    out.kind = ObstructionKind::isometry_failure;
  }
  return out;
}

ClassificationResult build_standard_basis(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                          double tol, PivotRule pivot) {
  const JCalculus calc(algebra, tol);
  const Splitting& sp = calc.splitting();
  const int cdim = complex_center_dim(calc, complex, tol);
  if (cdim != 1) {
    throw PreconditionError("standard basis needs center of complex dimension 1, got " + std::to_string(cdim));
  }
  const int dv = sp.complement_dim();
  if (dv == 0 || dv % 4 != 0) {
    throw StructuralError("dim v = " + std::to_string(dv) + " is not a positive multiple of 4: inconsistent with complex H-type");
  }

  const int dim = algebra.dim();
  const Matrix& g = algebra.gram();
  const Matrix& i = complex.matrix;
  const Vector z = pivot_vector(g, sp.center.basis, Matrix(dim, 0), pivot);
  const Vector iz = i * z;
  const Matrix jz = calc.compute_j(z).ambient();

  ClassificationResult result;
  result.n = dv / 4;
  result.pivot = pivot;
  result.tolerance_used = tol;

  Matrix built(dim, 0);
  while (built.cols() < dv) {
    const Vector x = pivot_vector(g, sp.complement.basis, built, pivot);
    const Vector y = jz * x;
    append_column(built, x);
    append_column(built, i * x);
    append_column(built, y);
    append_column(built, i * y);
    const Eigen::Index k = built.cols();
    result.step_orthonormality.push_back(
        (built.transpose() * g * built - Matrix::Identity(k, k)).cwiseAbs().maxCoeff());
  }

  Matrix basis(dim, dim);
  basis << built, z, iz;
  result.standard_basis = basis;
  result.iso_matrix = Eigen::PartialPivLU<Matrix>(basis).inverse();

  const Vector sigma = Eigen::JacobiSVD<Matrix>(basis).singularValues();
  result.condition_number = sigma[sigma.size() - 1] > 0.0 ? sigma[0] / sigma[sigma.size() - 1]
                                                          : std::numeric_limits<double>::infinity();

  const StructuredAlgebra standard = heisenberg_complex(result.n);
  result.residuals = residuals_for(algebra, complex, standard, basis, result.iso_matrix);
  if (!(result.condition_number < 1e6)) {
    throw ClassificationFailure("constructed basis is ill-conditioned (condition number " +
                                    std::to_string(result.condition_number) + ")",
                                result.residuals);
  }
  if (!(result.residuals.max() <= tol)) {
    throw ClassificationFailure("classification residuals exceed tolerance: bracket " +
                                    std::to_string(result.residuals.bracket) + ", metric " +
                                    std::to_string(result.residuals.metric) + ", complex " +
                                    std::to_string(result.residuals.complex_structure),
                                result.residuals);
  }
  return result;
}

Classification classify(const MetricLieAlgebra& algebra, const std::optional<ComplexStructure>& complex, double tol,
                        PivotRule pivot) {
  run_stage("validate", [&] {
    for (const Defect& d : validate_algebra(algebra, tol)) throw ValidationError(d.name, d.magnitude);
    if (complex) {
      for (const Defect& d : validate_complex_structure(algebra, *complex, tol)) {
        throw ValidationError(d.name, d.magnitude);
      }
    }
  });

  Classification out;
  out.verdict = run_stage("verify_h_type", [&] { return verify_h_type(algebra, tol); });

  if (!complex) {
    if (out.verdict.status == VerdictStatus::h_type) out.diagnostic = "no complex structure supplied";
    return out;
  }
  if (out.verdict.status == VerdictStatus::degenerate) return out;

  const int cdim = run_stage("center_complex_dimension", [&] { return center_complex_dimension(algebra, *complex, tol); });

  if (out.verdict.status == VerdictStatus::not_h_type) {
    if (cdim >= 2) {
      out.obstruction = run_stage("find_obstruction", [&] { return find_obstruction(algebra, *complex, tol, pivot); });
      out.diagnostic = "center has complex dimension " + std::to_string(cdim);
    }
    return out;
  }

  if (cdim == 1) {
    out.result = run_stage("build_standard_basis", [&] { return build_standard_basis(algebra, *complex, tol, pivot); });
    return out;
  }
  out.obstruction = run_stage("find_obstruction", [&] { return find_obstruction(algebra, *complex, tol, pivot); });
  out.diagnostic = "inconsistency: verifier accepted an algebra whose center has complex dimension " +
                   std::to_string(cdim);
  return out;
}

std::vector<Defect> verify_isomorphism(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                       const ClassificationResult& result, double tol) {
  const int dim = algebra.dim();
  const Matrix& iso = result.iso_matrix;
  if (iso.rows() != dim || iso.cols() != dim || dim != 4 * result.n + 2) {
    throw InputError("certificate dimensions do not match the algebra");
  }
  if (complex.matrix.rows() != dim || complex.matrix.cols() != dim) {
    throw InputError("complex structure has the wrong shape");
  }
  Eigen::FullPivLU<Matrix> lu(iso);
  lu.setThreshold(tol);
  if (!lu.isInvertible()) throw InputError("iso_matrix is singular");
  const Matrix basis = lu.inverse();

  // Standard bracket and complex structure written out from the defining relations.
  const int n = result.n;
  const int z = 4 * n, iz = z + 1;
  auto standard_bracket = [&](const Vector& p, const Vector& q) {
    Vector out = Vector::Zero(dim);
    for (int k = 0; k < n; ++k) {
      const int x = 4 * k, ix = x + 1, y = x + 2, iy = x + 3;
      out[z] += p[x] * q[y] - p[y] * q[x] - (p[ix] * q[iy] - p[iy] * q[ix]);
      out[iz] += p[ix] * q[y] - p[y] * q[ix] + p[x] * q[iy] - p[iy] * q[x];
    }
    return out;
  };
  Matrix standard_i = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; a += 2) {
    standard_i(a + 1, a) = 1.0;
    standard_i(a, a + 1) = -1.0;
  }

  double bracket = 0.0;
  const std::vector<Matrix> tensor = algebra.dense_brackets();
  for (int a = 0; a < dim; ++a) {
    const Matrix images = iso * tensor[a];
    for (int b = a + 1; b < dim; ++b) {
      bracket = std::max(bracket, (images.col(b) - standard_bracket(iso.col(a), iso.col(b))).norm());
    }
  }
  const double metric = (basis.transpose() * algebra.gram() * basis - Matrix::Identity(dim, dim)).norm();
  const double complex_residual = (iso * complex.matrix - standard_i * iso).norm();
  return {{"bracket", bracket}, {"metric", metric}, {"complex_structure", complex_residual}};
}

}  // namespace htype
