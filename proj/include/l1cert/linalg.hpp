#pragma once

#include "l1cert/common.hpp"

namespace l1cert::linalg {

struct SvdResult {
  Matrix U;       // orthonormal columns
  Vector sigma;   // nonincreasing
  Matrix V;       // orthonormal columns
};

struct SubspaceMetrics {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

struct MatrixMetrics {
  double spectral_norm = 0.0;
  double cond = 1.0;
  Index rank = 0;
  double lambda_max_MMt = 0.0;
  double lambda_min_MMt = 0.0;
};

/// max(rows, cols) * eps * sigma_max, the usual numerical-rank cutoff.
double default_rank_tol(const Matrix& M);

SvdResult svd(const Matrix& M);

Index numerical_rank(const Matrix& M, double rank_tol);
Index numerical_rank(const Matrix& M);

/// Orthonormal basis of Ker(M); zero columns when the kernel is trivial.
/// Each column has its first nonzero entry made positive.
Matrix nullspace_basis(const Matrix& M, double rank_tol);
Matrix nullspace_basis(const Matrix& M);

/// Moore-Penrose pseudo-inverse via SVD with explicit rank cutoff.
Matrix pseudo_inverse(const Matrix& M, double rank_tol);
Matrix pseudo_inverse(const Matrix& M);

/// Extreme singular values of M*B for an orthonormal basis B.
SubspaceMetrics subspace_metrics(const Matrix& M, const Matrix& B);

MatrixMetrics matrix_metrics(const Matrix& M);

/// Orthonormal basis of the column span of M (left singular vectors with
/// sigma above rank_tol).
Matrix range_basis(const Matrix& M, double rank_tol);
Matrix range_basis(const Matrix& M);

}  // namespace l1cert::linalg
