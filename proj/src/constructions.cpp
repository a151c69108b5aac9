#include "htype/constructions.hpp"

#include <random>
#include <string>

#include "htype/errors.hpp"

namespace htype {

namespace {

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Cayley-Dickson product on R^(2^k): (a, b)(c, d) = (ac - d* b, da + b c*).
std::vector<double> conjugate(std::vector<double> x) {
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = -x[i];
  return x;
}

std::vector<double> cd_multiply(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n == 1) return {x[0] * y[0]};
  const std::size_t h = n / 2;
  const std::vector<double> a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  const std::vector<double> c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  const auto ac = cd_multiply(a, c);
  const auto db = cd_multiply(conjugate(d), b);
  const auto da = cd_multiply(d, a);
  const auto bc = cd_multiply(b, conjugate(c));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = ac[i] - db[i];
    out[h + i] = da[i] + bc[i];
  }
  return out;
}

Matrix left_multiplication(int algebra_dim, int unit) {
  Matrix m(algebra_dim, algebra_dim);
  std::vector<double> e(algebra_dim, 0.0);
  e[unit] = 1.0;
  for (int p = 0; p < algebra_dim; ++p) {
    std::vector<double> f(algebra_dim, 0.0);
    f[p] = 1.0;
    const auto prod = cd_multiply(e, f);
    for (int q = 0; q < algebra_dim; ++q) m(q, p) = prod[q];
  }
  return m;
}

}  // namespace

StructuredAlgebra heisenberg_complex(int n) {
  if (n < 1) throw InputError("heisenberg_complex needs n >= 1, got " + std::to_string(n));
  const int dim = 4 * n + 2;
  const int z = 4 * n;
  const int iz = z + 1;
  std::vector<StructureConstant> sc;
  sc.reserve(4 * n);
  Matrix complex = Matrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const int x = 4 * k, ix = x + 1, y = x + 2, iy = x + 3;
    sc.push_back({x, y, z, 1.0});
    sc.push_back({x, iy, iz, 1.0});
    sc.push_back({ix, y, iz, 1.0});
    sc.push_back({ix, iy, z, -1.0});
    for (int g : {x, y}) {
      complex(g + 1, g) = 1.0;
      complex(g, g + 1) = -1.0;
    }
  }
  complex(iz, z) = 1.0;
  complex(z, iz) = -1.0;
  return {MetricLieAlgebra(dim, std::move(sc), Matrix::Identity(dim, dim)), ComplexStructure{std::move(complex)}};
}

MetricLieAlgebra heisenberg_real(int n) {
  if (n < 1) throw InputError("heisenberg_real needs n >= 1, got " + std::to_string(n));
  const int dim = 2 * n + 1;
  std::vector<StructureConstant> sc;
  for (int k = 0; k < n; ++k) sc.push_back({2 * k, 2 * k + 1, 2 * n, 1.0});
  return MetricLieAlgebra(dim, std::move(sc), Matrix::Identity(dim, dim));
}

MetricLieAlgebra abelian(int dim, std::optional<Matrix> gram) {
  return MetricLieAlgebra(dim, {}, gram ? std::move(*gram) : Matrix(Matrix::Identity(dim, dim)));
}

CliffordGenerators standard_clifford_generators(int center_dim, int module_dim) {
  int block = 0;
  if (center_dim == 1) {
    block = 2;
  } else if (center_dim >= 2 && center_dim <= 3) {
    block = 4;
  } else if (center_dim >= 4 && center_dim <= 7) {
    block = 8;
  } else {
    throw InputError("no built-in Clifford generators for center dimension " + std::to_string(center_dim));
  }
  if (module_dim <= 0 || module_dim % block != 0) {
    throw InputError("module dimension for center dimension " + std::to_string(center_dim) +
                     " must be a positive multiple of " + std::to_string(block));
  }

  CliffordGenerators out{center_dim, module_dim, {}};
  for (int a = 1; a <= center_dim; ++a) {
    const Matrix unit = left_multiplication(block, a);
    Matrix g = Matrix::Zero(module_dim, module_dim);
    for (int off = 0; off < module_dim; off += block) g.block(off, off, block, block) = unit;
    out.generators.push_back(std::move(g));
  }
  return out;
}

CliffordCheck check_clifford(const CliffordGenerators& gens, const Matrix& gram_module) {
  CliffordCheck out;
  const int m = gens.module_dim;
  const Matrix eye = Matrix::Identity(m, m);
  const int d = static_cast<int>(gens.generators.size());
  for (int a = 0; a < d; ++a) {
    const Matrix& ga = gens.generators[a];
    const double skew = (gram_module * ga + ga.transpose() * gram_module).norm();
    if (out.skew_index < 0 || skew > out.skew_defect) {
      out.skew_defect = skew;
      out.skew_index = a;
    }
    for (int b = a; b < d; ++b) {
      const Matrix& gb = gens.generators[b];
      Matrix rel = ga * gb + gb * ga;
      if (a == b) rel += 2.0 * eye;
      const double defect = rel.norm();
      if (out.a < 0 || defect > out.relation_defect) {
        out.relation_defect = defect;
        out.a = a;
        out.b = b;
      }
    }
  }
  return out;
}

MetricLieAlgebra from_clifford_representation(const CliffordGenerators& gens, std::optional<Matrix> gram_center,
                                              std::optional<Matrix> gram_module, double tol) {
  const int d = gens.center_dim;
  const int m = gens.module_dim;
  if (d < 1 || m < 1) throw InputError("Clifford data needs positive center and module dimensions");
  if (static_cast<int>(gens.generators.size()) != d) {
    throw InputError("expected " + std::to_string(d) + " generators, got " + std::to_string(gens.generators.size()));
  }
  for (const Matrix& g : gens.generators) {
    if (g.rows() != m || g.cols() != m) throw InputError("generator is not " + std::to_string(m) + "x" + std::to_string(m));
  }
  const Matrix gz = gram_center ? *gram_center : Matrix(Matrix::Identity(d, d));
  const Matrix gv = gram_module ? *gram_module : Matrix(Matrix::Identity(m, m));
  if (gz.rows() != d || gz.cols() != d || gv.rows() != m || gv.cols() != m) {
    throw InputError("gram blocks do not match the Clifford dimensions");
  }

  const CliffordCheck check = check_clifford(gens, gv);
  if (check.skew_defect > tol) {
    throw InputError("Clifford generator " + std::to_string(check.skew_index) + " is not skew (defect " +
                     std::to_string(check.skew_defect) + ")");
  }
  if (check.relation_defect > tol) {
    throw InputError("Clifford relation fails for pair (" + std::to_string(check.a) + ", " + std::to_string(check.b) +
                     "), defect " + std::to_string(check.relation_defect));
  }

  // Center coordinates of the orthonormal frame zeta_a.
  Eigen::LLT<Matrix> llt(0.5 * (gz + gz.transpose()));
  if (llt.info() != Eigen::Success) throw InputError("center gram is not positive definite");
  const Matrix upper = llt.matrixU();
  const Matrix zeta = upper.triangularView<Eigen::Upper>().solve(Matrix::Identity(d, d));

  std::vector<Matrix> forms;
  forms.reserve(d);
  for (const Matrix& g : gens.generators) forms.push_back(gv * g);

  std::vector<StructureConstant> sc;
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      Vector k(d);
      for (int a = 0; a < d; ++a) k[a] = forms[a](q, p);
      const Vector coords = zeta * k;
      for (int c = 0; c < d; ++c) {
        if (coords[c] != 0.0) sc.push_back({p, q, m + c, coords[c]});
      }
    }
  }
  return MetricLieAlgebra(m + d, std::move(sc), block_diagonal(gv, gz));
}

StructuredAlgebra direct_sum(const StructuredAlgebra& a, const StructuredAlgebra& b) {
  if (a.complex.has_value() != b.complex.has_value()) {
    throw InputError("direct sum needs complex structures on both summands or neither");
  }
  const int offset = a.algebra.dim();
  std::vector<StructureConstant> sc(a.algebra.structure_constants().begin(), a.algebra.structure_constants().end());
  for (const auto& e : b.algebra.structure_constants()) sc.push_back({e.i + offset, e.j + offset, e.k + offset, e.c});
  StructuredAlgebra out{MetricLieAlgebra(offset + b.algebra.dim(), std::move(sc),
                                         block_diagonal(a.algebra.gram(), b.algebra.gram())),
                        std::nullopt};
  if (a.complex) out.complex = ComplexStructure{block_diagonal(a.complex->matrix, b.complex->matrix)};
  return out;
}

StructuredAlgebra change_basis(const StructuredAlgebra& input, const Matrix& transform) {
  const MetricLieAlgebra& alg = input.algebra;
  const int n = alg.dim();
  if (transform.rows() != n || transform.cols() != n) throw InputError("transform has the wrong shape");
  Eigen::PartialPivLU<Matrix> lu(transform);
  const Matrix inverse = lu.inverse();

  std::vector<StructureConstant> sc;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const Vector w = inverse * alg.bracket(transform.col(a), transform.col(b));
      for (int k = 0; k < n; ++k) {
        if (w[k] != 0.0) sc.push_back({a, b, k, w[k]});
      }
    }
  }
  const Matrix g = transform.transpose() * alg.gram() * transform;
  StructuredAlgebra out{MetricLieAlgebra(n, std::move(sc), 0.5 * (g + g.transpose())), std::nullopt};
  if (input.complex) out.complex = ComplexStructure{inverse * input.complex->matrix * transform};
  return out;
}

Scrambled scramble(const StructuredAlgebra& input, std::uint64_t seed) {
  const int n = input.algebra.dim();
  const OrthonormalFrame& frame = input.algebra.frame();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = normal(rng);
  }

  if (input.complex) {
    // X - C X C commutes with C, and so does its polar factor.
    const Matrix c = frame.to_frame * input.complex->matrix * frame.from_frame;
    x = x - c * x * c;
  }
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix q = svd.matrixU() * svd.matrixV().transpose();
  Matrix t = frame.from_frame * q * frame.to_frame;
  return {change_basis(input, t), std::move(t)};
}

}  // namespace htype
