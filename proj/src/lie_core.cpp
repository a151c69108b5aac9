#include "htype/lie_core.hpp"

#include <algorithm>
#include <cmath>

#include "htype/errors.hpp"

namespace htype {

MetricLieAlgebra::MetricLieAlgebra(int dim, std::vector<StructureConstant> constants, Matrix gram)
    : dim_(dim), constants_(std::move(constants)), gram_(std::move(gram)) {
  if (dim_ < 0) throw InputError("negative dimension");
  if (gram_.rows() != dim_ || gram_.cols() != dim_) {
    throw InputError("gram must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
  }
  for (const auto& e : constants_) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim_ || e.j >= dim_ || e.k >= dim_) {
      throw InputError("structure constant index out of range: (" + std::to_string(e.i) + ", " +
                       std::to_string(e.j) + ", " + std::to_string(e.k) + ")");
    }
    if (e.i >= e.j) {
      throw InputError("lower-triangular entry (i >= j): (" + std::to_string(e.i) + ", " +
                       std::to_string(e.j) + ")");
    }
  }

  if (dim_ > 0 && gram_.allFinite()) {
    const Matrix sym = 0.5 * (gram_ + gram_.transpose());
    Eigen::LLT<Matrix> llt(sym);
    if (llt.info() == Eigen::Success) {
      const Matrix lower = llt.matrixL();
      Matrix upper = lower.transpose();
      Matrix inv_upper = upper.triangularView<Eigen::Upper>().solve(Matrix::Identity(dim_, dim_));
      frame_ = OrthonormalFrame{std::move(upper), std::move(inv_upper)};
    }
  } else if (dim_ == 0) {
    frame_ = OrthonormalFrame{Matrix(0, 0), Matrix(0, 0)};
  }

  if (dim_ > 0 && !constants_.empty()) {
    const Matrix k = stacked_adjoint();
    const Matrix normal = k.transpose() * k;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(normal, Eigen::EigenvaluesOnly);
    bracket_scale_ = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
  }
}

void MetricLieAlgebra::check_vector(const Vector& x) const {
  if (x.size() != dim_) {
    throw InputError("vector of length " + std::to_string(x.size()) + " in algebra of dimension " +
                     std::to_string(dim_));
  }
}

Vector MetricLieAlgebra::bracket(const Vector& x, const Vector& y) const {
  check_vector(x);
  check_vector(y);
  Vector out = Vector::Zero(dim_);
  for (const auto& e : constants_) {
    out[e.k] += e.c * (x[e.i] * y[e.j] - x[e.j] * y[e.i]);
  }
  return out;
}

Matrix MetricLieAlgebra::adjoint(const Vector& x) const {
  check_vector(x);
  Matrix ad = Matrix::Zero(dim_, dim_);
  for (const auto& e : constants_) {
    ad(e.k, e.j) += e.c * x[e.i];
    ad(e.k, e.i) -= e.c * x[e.j];
  }
  return ad;
}

Matrix MetricLieAlgebra::stacked_adjoint() const {
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(dim_) * dim_, dim_);
  for (const auto& e : constants_) {
    // [x, e_j] picks up c x_i e_k; [x, e_i] picks up -c x_j e_k.
    k(static_cast<Eigen::Index>(e.j) * dim_ + e.k, e.i) += e.c;
    k(static_cast<Eigen::Index>(e.i) * dim_ + e.k, e.j) -= e.c;
  }
  return k;
}

double MetricLieAlgebra::inner(const Vector& x, const Vector& y) const {
  check_vector(x);
  check_vector(y);
  return x.dot(gram_ * y);
}

double MetricLieAlgebra::norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

const OrthonormalFrame& MetricLieAlgebra::frame() const {
  if (!frame_) throw InputError("gram matrix is not positive definite");
  return *frame_;
}

std::vector<Matrix> MetricLieAlgebra::dense_brackets() const {
  std::vector<Matrix> out(dim_, Matrix::Zero(dim_, dim_));
  for (const auto& e : constants_) {
    out[e.i](e.k, e.j) += e.c;
    out[e.j](e.k, e.i) -= e.c;
  }
  return out;
}

AlgebraDefectProfile measure_algebra(const MetricLieAlgebra& algebra) {
  AlgebraDefectProfile p;
  const int n = algebra.dim();
  if (n == 0) return p;

  const Matrix& g = algebra.gram();
  p.gram_symmetry = (g - g.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  p.gram_min_eigenvalue = eig.eigenvalues().minCoeff();

  if (algebra.structure_constants().empty()) return p;
  const std::vector<Matrix> ad = algebra.dense_brackets();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Vector jac = ad[i] * ad[j].col(k) + ad[j] * ad[k].col(i) + ad[k] * ad[i].col(j);
        p.jacobi = std::max(p.jacobi, jac.norm());
      }
    }
  }
  return p;
}

std::vector<Defect> validate_algebra(const MetricLieAlgebra& algebra, double tol) {
  std::vector<Defect> out;
  if (algebra.dim() == 0) return out;
  const AlgebraDefectProfile p = measure_algebra(algebra);
  if (p.jacobi > tol) out.push_back({"jacobi", p.jacobi});
  if (p.gram_symmetry > tol) out.push_back({"gram_symmetry", p.gram_symmetry});
  if (p.gram_min_eigenvalue <= tol) out.push_back({"gram_positive_definiteness", tol - p.gram_min_eigenvalue});
  return out;
}

ComplexStructureDefectProfile measure_complex_structure(const MetricLieAlgebra& algebra,
                                                        const ComplexStructure& complex) {
  const int n = algebra.dim();
  const Matrix& c = complex.matrix;
  if (c.rows() != n || c.cols() != n) {
    throw InputError("complex structure must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (n % 2 != 0) throw StructuralError("odd real dimension " + std::to_string(n) + " admits no complex structure");

  ComplexStructureDefectProfile p;
  if (n == 0) return p;
  p.square = (c * c + Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const Matrix& g = algebra.gram();
  p.hermitian = (c.transpose() * g * c - g).cwiseAbs().maxCoeff();

  // ad_{C e_a} - C ad_{e_a}, column b is [C e_a, e_b] - C [e_a, e_b].
  for (int a = 0; a < n; ++a) {
    const Matrix diff = algebra.adjoint(c.col(a)) - c * algebra.adjoint(Vector::Unit(n, a));
    p.bracket = std::max(p.bracket, diff.colwise().norm().maxCoeff());
  }
  return p;
}

std::vector<Defect> validate_complex_structure(const MetricLieAlgebra& algebra, const ComplexStructure& complex,
                                               double tol) {
  const ComplexStructureDefectProfile p = measure_complex_structure(algebra, complex);
  std::vector<Defect> out;
  if (p.square > tol) out.push_back({"complex_square", p.square});
  if (p.bracket > tol) out.push_back({"complex_bracket", p.bracket});
  if (p.hermitian > tol) out.push_back({"complex_hermitian", p.hermitian});
  return out;
}

Matrix gram_schmidt(const Matrix& gram, const Matrix& vectors, double tol) {
  Matrix out(vectors.rows(), 0);
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Vector v = vectors.col(c);
    const double original = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index q = 0; q < out.cols(); ++q) {
        v -= out.col(q).dot(gram * v) * out.col(q);
      }
    }
    const double residual = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (residual <= tol * original) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / residual;
  }
  return out;
}

Subspace center(const MetricLieAlgebra& algebra, double tol) {
  const int n = algebra.dim();
  if (algebra.bracket_scale() == 0.0) {
    return {algebra.frame().from_frame, true};
  }
  const Matrix k = algebra.stacked_adjoint();
  Eigen::BDCSVD<Matrix> svd(k, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double threshold = tol * sigma[0];
  Matrix kernel(n, 0);
  for (int i = 0; i < n; ++i) {
    if (sigma[i] <= threshold) {
      kernel.conservativeResize(Eigen::NoChange, kernel.cols() + 1);
      kernel.col(kernel.cols() - 1) = svd.matrixV().col(i);
    }
  }
  return {gram_schmidt(algebra.gram(), kernel, tol), true};
}

Subspace orthogonal_complement(const MetricLieAlgebra& algebra, const Subspace& subspace) {
  const int n = algebra.dim();
  if (subspace.basis.rows() != n) throw InputError("subspace basis does not live in the algebra");
  const OrthonormalFrame& frame = algebra.frame();
  if (subspace.dim() == 0) return {frame.from_frame, true};

  const Matrix in_frame = frame.to_frame * subspace.basis;
  Eigen::ColPivHouseholderQR<Matrix> qr(in_frame);
  const Eigen::Index rank = qr.rank();
  const Matrix q = qr.householderQ();
  const Matrix rest = q.rightCols(n - rank);
  return {frame.from_frame * rest, true};
}

namespace {

// Left singular vectors of `m` whose singular values exceed `threshold`.
Matrix column_span(const Matrix& m, double threshold) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > threshold) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

std::optional<int> nilpotency_step(const MetricLieAlgebra& algebra, double tol) {
  const int n = algebra.dim();
  if (algebra.bracket_scale() == 0.0) return 1;
  const double threshold = tol * algebra.bracket_scale();
  const std::vector<Matrix> ad = algebra.dense_brackets();

  Matrix current = Matrix::Identity(n, n);
  for (int step = 1;; ++step) {
    Matrix images(n, static_cast<Eigen::Index>(n) * current.cols());
    for (int i = 0; i < n; ++i) {
      images.middleCols(static_cast<Eigen::Index>(i) * current.cols(), current.cols()) = ad[i] * current;
    }
    Matrix next = column_span(images, threshold);
    if (next.cols() == 0) return step;
    if (next.cols() == current.cols()) return std::nullopt;
    current = std::move(next);
  }
}

}  // namespace htype
