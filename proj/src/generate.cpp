#include "l1cert/generate.hpp"

#include <Eigen/QR>
#include <cmath>

#include "l1cert/linalg.hpp"

namespace l1cert::generate {

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix M(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) M(r, c) = gauss(rng);
  return M;
}

Vector sphere_noise(Index dim, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector w(dim);
  double norm = 0.0;
  do {
    for (Index i = 0; i < dim; ++i) w(i) = gauss(rng);
    norm = w.norm();
  } while (norm < 1e-12);
  return w * (radius / norm);
}

certify::ProblemInstance random_instance(const GenerateOptions& opt) {
  if (opt.m > opt.n) throw InvalidInputError("random_instance: m must not exceed n");
  const Index l = opt.psi == PsiKind::Identity ? opt.n : opt.l;
  if (opt.sparsity > l) throw InvalidInputError("random_instance: sparsity exceeds l");
  if (opt.psi != PsiKind::Identity && opt.l < opt.n)
    throw InvalidInputError("random_instance: l must be at least n for a frame");

  std::mt19937_64 rng(opt.seed);
  certify::ProblemInstance inst;
  inst.seed = opt.seed;

  inst.phi = gaussian_matrix(opt.m, opt.n, rng);
  if (opt.rounded_phi) {
    inst.phi = inst.phi.unaryExpr([](double v) {
      if (v > 0.5) return 1.0;
      if (v < -0.5) return -1.0;
      return 0.0;
    });
    // Keep rows nonzero so the row normalization below is well defined.
    for (Index r = 0; r < inst.phi.rows(); ++r)
      if (inst.phi.row(r).cwiseAbs().maxCoeff() == 0.0) inst.phi(r, 0) = 1.0;
  } else {
    for (Index r = 0; r < inst.phi.rows(); ++r) inst.phi.row(r) /= inst.phi.row(r).norm();
  }

  switch (opt.psi) {
    case PsiKind::Identity:
      inst.psi = Matrix::Identity(opt.n, opt.n);
      break;
    case PsiKind::TightFrame: {
      // Orthonormal rows of an l x n Gaussian give Psi Psi' = I.
      const Matrix G = gaussian_matrix(l, opt.n, rng);
      Eigen::HouseholderQR<Matrix> qr(G);
      const Matrix Q = Matrix(qr.householderQ()).leftCols(opt.n);
      inst.psi = Q.transpose();
      break;
    }
    case PsiKind::Random:
      inst.psi = gaussian_matrix(opt.n, l, rng);
      break;
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(opt.n);
  if (opt.psi == PsiKind::Identity) {
    x.setZero();
    std::vector<Index> idx(static_cast<std::size_t>(opt.n));
    for (Index i = 0; i < opt.n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < opt.sparsity; ++i) {
      std::uniform_int_distribution<Index> pick(i, opt.n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
      double v = gauss(rng);
      if (std::abs(v) < 0.3) v = v < 0 ? -0.3 : 0.3;  // keep entries away from 0
      x(idx[static_cast<std::size_t>(i)]) = v;
    }
  } else {
    for (Index i = 0; i < opt.n; ++i) x(i) = gauss(rng);
  }
  inst.x_star = x;
  inst.b = inst.phi * x;
  return inst;
}

}  // namespace l1cert::generate
