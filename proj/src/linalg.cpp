#include "l1cert/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace l1cert::linalg {

namespace {

void check_finite(const Matrix& M) {
  if (!M.allFinite()) throw InvalidInputError("matrix contains non-finite entries");
}

// Deterministic sign convention: first entry with |.| above a relative
// threshold is made positive.
void fix_column_signs(Matrix& B) {
  for (Index j = 0; j < B.cols(); ++j) {
    const double scale = B.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < B.rows(); ++i) {
      if (std::abs(B(i, j)) > 1e-12 * scale) {
        if (B(i, j) < 0) B.col(j) = -B.col(j);
        break;
      }
    }
  }
}

}  // namespace

double default_rank_tol(const Matrix& M) {
  if (M.size() == 0) return std::numeric_limits<double>::epsilon();
  const double smax = M.jacobiSvd().singularValues().size() > 0
                          ? M.jacobiSvd().singularValues()(0)
                          : 0.0;
  return static_cast<double>(std::max(M.rows(), M.cols())) *
         std::numeric_limits<double>::epsilon() * std::max(smax, 1.0e-300);
}

SvdResult svd(const Matrix& M) {
  check_finite(M);
  Eigen::JacobiSVD<Matrix> dec(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Index numerical_rank(const Matrix& M, double rank_tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> dec(M);
  const Vector& s = dec.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol) ++r;
  return r;
}

Index numerical_rank(const Matrix& M) { return numerical_rank(M, default_rank_tol(M)); }

Matrix nullspace_basis(const Matrix& M, double rank_tol) {
  check_finite(M);
  if (rank_tol <= 0) throw InvalidInputError("rank_tol must be positive");
  const Index n = M.cols();
  if (M.rows() == 0 || n == 0) {
    // Kernel of a 0 x n map is all of R^n.
    Matrix Q = Matrix::Identity(n, n);
    return Q;
  }
  Eigen::JacobiSVD<Matrix> dec(M, Eigen::ComputeFullV);
  const Vector& s = dec.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol) ++r;
  Matrix Q = dec.matrixV().rightCols(n - r);
  fix_column_signs(Q);
  return Q;
}

Matrix nullspace_basis(const Matrix& M) { return nullspace_basis(M, default_rank_tol(M)); }

Matrix pseudo_inverse(const Matrix& M, double rank_tol) {
  check_finite(M);
  if (M.rows() == 0 || M.cols() == 0) return Matrix::Zero(M.cols(), M.rows());
  Eigen::JacobiSVD<Matrix> dec(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = dec.singularValues();
  Vector sinv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol) sinv(i) = 1.0 / s(i);
  return dec.matrixV() * sinv.asDiagonal() * dec.matrixU().transpose();
}

Matrix pseudo_inverse(const Matrix& M) { return pseudo_inverse(M, default_rank_tol(M)); }

SubspaceMetrics subspace_metrics(const Matrix& M, const Matrix& B) {
  check_finite(M);
  check_finite(B);
  if (B.cols() < 1) throw EmptySubspaceError("basis has zero columns");
  if ((B.transpose() * B - Matrix::Identity(B.cols(), B.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInputError("B is not orthonormal");
  Eigen::JacobiSVD<Matrix> dec(M * B);
  const Vector& s = dec.singularValues();
  SubspaceMetrics out;
  out.sigma_max = s.size() > 0 ? s(0) : 0.0;
  out.sigma_min = s.size() > 0 ? s(s.size() - 1) : 0.0;
  if (M.rows() < B.cols()) out.sigma_min = 0.0;  // rank-deficient by shape
  return out;
}

MatrixMetrics matrix_metrics(const Matrix& M) {
  check_finite(M);
  MatrixMetrics out;
  if (M.rows() == 0 || M.cols() == 0) return out;
  Eigen::JacobiSVD<Matrix> dec(M);
  const Vector& s = dec.singularValues();
  out.spectral_norm = s(0);
  const double tol = default_rank_tol(M);
  double smin_nz = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) {
      ++out.rank;
      smin_nz = s(i);
    }
  }
  out.cond = (out.rank > 0) ? out.spectral_norm / smin_nz : 1.0;
  out.lambda_max_MMt = s(0) * s(0);
  // lambda_min of M*M^T: zero when rows exceed the singular value count.
  const double stail = s(s.size() - 1);
  out.lambda_min_MMt = (M.rows() <= M.cols()) ? stail * stail : 0.0;
  return out;
}

Matrix range_basis(const Matrix& M, double rank_tol) {
  check_finite(M);
  if (M.rows() == 0 || M.cols() == 0) return Matrix::Zero(M.rows(), 0);
  Eigen::JacobiSVD<Matrix> dec(M, Eigen::ComputeThinU);
  const Vector& s = dec.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol) ++r;
  Matrix B = dec.matrixU().leftCols(r);
  fix_column_signs(B);
  return B;
}

Matrix range_basis(const Matrix& M) { return range_basis(M, default_rank_tol(M)); }

}  // namespace l1cert::linalg
