#pragma once

#include "l1cert/common.hpp"

namespace l1cert::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, NotConverged };

struct LpOptions {
  double feas_tol = 1e-9;
  double gap_tol = 1e-8;
  int max_iter = 20000;
};

struct LpSolution {
  LpStatus status = LpStatus::NotConverged;
  Vector u;            // minimizer (Optimal)
  double value = 0.0;  // inf-norm over the free coordinates
  Vector dual;         // p with sum_F |(A'p)_i| <= 1; certifies the value
  double duality_gap = 0.0;
  Vector infeasibility_certificate;  // q with q'A ~ 0, q'u1 > 0 (Infeasible)
  int iterations = 0;
};

/// min ||u||_inf  s.t.  A u = u1.
LpSolution solve_inf_norm_eq(const Matrix& A, const Vector& u1, const LpOptions& opt = {});

/// min max_{i in free_idx} |u_i|  s.t.  A u = u1, |u_k| <= 1 for k in boxed_idx.
/// free_idx and boxed_idx must partition the columns of A.
LpSolution solve_inf_norm_box(const Matrix& A, const Vector& u1, const IndexSet& free_idx,
                              const IndexSet& boxed_idx, const LpOptions& opt = {});

/// Optimum of  max <p, a>  s.t.  ||A'p||_1 <= 1; the Lagrange dual of
/// solve_inf_norm_eq(A, a). Throws NotConvergedError on iteration limit.
/// Unbounded status signals primal infeasibility.
struct DualValue {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
};
DualValue dual_value(const Matrix& A, const Vector& a, const LpOptions& opt = {});

/// min_alpha || target - N alpha ||_inf  (Chebyshev fit over an affine family).
/// N may have zero columns, in which case the value is ||target||_inf.
double chebyshev_affine_min(const Matrix& N, const Vector& target, const LpOptions& opt = {});

}  // namespace l1cert::lp
