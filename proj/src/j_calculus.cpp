#include "htype/j_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "htype/errors.hpp"

namespace htype {

std::shared_ptr<const Splitting> split(const MetricLieAlgebra& algebra, double tol) {
  auto out = std::make_shared<Splitting>();
  out->gram = algebra.gram();
  out->center = center(algebra, tol);
  out->complement = orthogonal_complement(algebra, out->center);
  return out;
}

Matrix JOperator::ambient() const {
  const Matrix& v = frame->complement.basis;
  return v * action() * v.transpose() * frame->gram;
}

JCalculus::JCalculus(MetricLieAlgebra algebra, double tol)
    : algebra_(std::move(algebra)),
      tol_(tol),
      split_(split(algebra_, tol)),
      gram_solver_(0.5 * (algebra_.gram() + algebra_.gram().transpose())),
      stacked_adjoint_(algebra_.stacked_adjoint()) {}

void JCalculus::require_central(const Vector& z) const {
  if (z.size() != algebra_.dim()) {
    throw InputError("center vector has length " + std::to_string(z.size()) + ", expected " +
                     std::to_string(algebra_.dim()));
  }
  const double residual = (stacked_adjoint_ * z).norm();
  if (residual > tol_ * algebra_.bracket_scale() * z.norm()) throw NotCentralError(residual);
  if (split_->complement_dim() == 0) throw DegenerateInputError("trivial v: the algebra is abelian");
}

JOperator JCalculus::compute_j(const Vector& z) const {
  require_central(z);
  const Matrix& g = algebra_.gram();
  const Matrix& v = split_->complement.basis;
  const Matrix& c = split_->center.basis;
  const Vector gz = g * z;
  const Eigen::Index dv = v.cols();

  Matrix m(dv, dv);
  for (Eigen::Index a = 0; a < dv; ++a) {
    // <w, y> = <z, [u_a, y]> for all y in g; the part of w in v is J_z u_a.
    const Vector rhs = algebra_.adjoint(v.col(a)).transpose() * gz;
    Vector w = gram_solver_.solve(rhs);
    w -= c * (c.transpose() * (g * w));
    m.row(a) = (v.transpose() * (g * w)).transpose();
  }
  return JOperator{z, std::move(m), split_};
}

Matrix JCalculus::j_bilinear_form(const Vector& z) const {
  require_central(z);
  const Matrix& v = split_->complement.basis;
  const Vector gz = algebra_.gram() * z;
  Matrix b = Matrix::Zero(v.cols(), v.cols());
  for (const auto& e : algebra_.structure_constants()) {
    const double weight = e.c * gz[e.k];
    if (weight == 0.0) continue;
    b.noalias() += weight * (v.row(e.i).transpose() * v.row(e.j) - v.row(e.j).transpose() * v.row(e.i));
  }
  return b;
}

double JCalculus::clifford_defect(const Vector& z, const Vector& w) const {
  const Matrix jz = compute_j(z).action();
  const Matrix jw = compute_j(w).action();
  const Eigen::Index dv = jz.rows();
  return (jz * jw + jw * jz + 2.0 * algebra_.inner(z, w) * Matrix::Identity(dv, dv)).norm();
}

Matrix JCalculus::complex_on_complement(const ComplexStructure& complex) const {
  const Matrix& cm = complex.matrix;
  if (cm.rows() != algebra_.dim() || cm.cols() != algebra_.dim()) {
    throw InputError("complex structure has the wrong shape");
  }
  const Matrix& v = split_->complement.basis;
  const Matrix image = cm * v;
  const Matrix restricted = v.transpose() * algebra_.gram() * image;
  const double residual = (image - v * restricted).norm();
  if (residual > tol_ * std::max(1.0, image.norm())) {
    throw StructuralError("complex structure does not preserve splitting (residual " + std::to_string(residual) +
                          ")");
  }
  return restricted;
}

JCalculus::ConjugateLinearity JCalculus::conjugate_linearity_defect(const ComplexStructure& complex,
                                                                   const Vector& z) const {
  require_central(z);
  const Matrix iv = complex_on_complement(complex);
  const Matrix jz = compute_j(z).action();
  const Matrix jiz = compute_j(complex.matrix * z).action();
  return {(jiz - iv * jz).norm(), (jz * iv + iv * jz).norm()};
}

double JCalculus::isometry_defect(const Vector& z) const {
  const double length = algebra_.norm(z);
  if (std::abs(length - 1.0) > tol_) {
    throw InputError("isometry defect needs a unit center vector, got norm " + std::to_string(length));
  }
  const Matrix jz = compute_j(z).action();
  return (jz.transpose() * jz - Matrix::Identity(jz.rows(), jz.cols())).norm();
}

JCalculus::PolarizedIsometry JCalculus::polarized_isometry() const {
  PolarizedIsometry out;
  const Matrix& c = split_->center.basis;
  const Eigen::Index dv = split_->complement_dim();
  if (c.cols() == 0 || dv == 0) return out;

  std::vector<Matrix> ops;
  ops.reserve(c.cols());
  for (Eigen::Index a = 0; a < c.cols(); ++a) ops.push_back(compute_j(c.col(a)).action());

  const Matrix eye = Matrix::Identity(dv, dv);
  for (int a = 0; a < static_cast<int>(ops.size()); ++a) {
    for (int b = a; b < static_cast<int>(ops.size()); ++b) {
      Matrix m = ops[a].transpose() * ops[b] + ops[b].transpose() * ops[a];
      if (a == b) m -= 2.0 * eye;
      const double d = m.norm();
      if (out.a < 0 || d > out.defect) out = {d, a, b};
    }
  }
  return out;
}

Vector JCalculus::random_unit_central(std::mt19937_64& rng) const {
  const Matrix& c = split_->center.basis;
  std::normal_distribution<double> normal;
  Vector coeffs(c.cols());
  do {
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] = normal(rng);
  } while (coeffs.norm() == 0.0);
  return c * (coeffs / coeffs.norm());
}

JOperator compute_j(const MetricLieAlgebra& algebra, const Vector& z, double tol) {
  return JCalculus(algebra, tol).compute_j(z);
}

Matrix j_bilinear_form(const MetricLieAlgebra& algebra, const Vector& z, double tol) {
  return JCalculus(algebra, tol).j_bilinear_form(z);
}

double clifford_defect(const MetricLieAlgebra& algebra, const Vector& z, const Vector& w, double tol) {
  return JCalculus(algebra, tol).clifford_defect(z, w);
}

JCalculus::ConjugateLinearity conjugate_linearity_defect(const MetricLieAlgebra& algebra,
                                                         const ComplexStructure& complex, const Vector& z,
                                                         double tol) {
  return JCalculus(algebra, tol).conjugate_linearity_defect(complex, z);
}

double isometry_defect(const MetricLieAlgebra& algebra, const Vector& z, double tol) {
  return JCalculus(algebra, tol).isometry_defect(z);
}

double polarized_isometry_defect(const MetricLieAlgebra& algebra, double tol) {
  return JCalculus(algebra, tol).polarized_isometry_defect();
}

}  // namespace htype
