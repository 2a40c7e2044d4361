#include "l1cert/lp.hpp"

#include <cmath>

#include "l1cert/simplex.hpp"

namespace l1cert::lp {

namespace {

// Layout of the standard-form reformulation of the box variant:
//   variables [t, u+, u-, s]  with  A(u+ - u-) = u1,
//   u+_i + u-_i + s_i - t = 0   (i free),
//   u+_k + u-_k + s_k     = 1   (k boxed),
// all variables nonnegative, objective t.
LpSolution solve_box_impl(const Matrix& A, const Vector& u1, const IndexSet& free_idx,
                          const IndexSet& boxed_idx, const LpOptions& opt) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (u1.size() != m) throw InvalidInputError("solve_inf_norm: rows(A) != length(u1)");
  if (!A.allFinite() || !u1.allFinite())
    throw InvalidInputError("solve_inf_norm: non-finite input");
  {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (Index i : free_idx) {
      if (i < 0 || i >= n) throw InvalidInputError("free_idx out of range");
      ++seen[static_cast<std::size_t>(i)];
    }
    for (Index k : boxed_idx) {
      if (k < 0 || k >= n) throw InvalidInputError("boxed_idx out of range");
      ++seen[static_cast<std::size_t>(k)];
    }
    for (int s : seen)
      if (s != 1) throw InvalidInputError("free_idx/boxed_idx must partition the columns");
  }

  LpSolution out;
  if (m == 0) {
    // Unconstrained: u = 0 is feasible and optimal.
    out.status = LpStatus::Optimal;
    out.u = Vector::Zero(n);
    out.value = 0.0;
    out.dual = Vector::Zero(0);
    return out;
  }

  const Index nv = 1 + 3 * n;  // t, u+, u-, s
  const Index rows = m + n;
  Matrix E = Matrix::Zero(rows, nv);
  Vector rhs = Vector::Zero(rows);
  Vector cost = Vector::Zero(nv);
  cost(0) = 1.0;

  E.block(0, 1, m, n) = A;
  E.block(0, 1 + n, m, n) = -A;
  rhs.head(m) = u1;

  std::vector<bool> is_free(static_cast<std::size_t>(n), false);
  for (Index i : free_idx) is_free[static_cast<std::size_t>(i)] = true;
  for (Index i = 0; i < n; ++i) {
    const Index r = m + i;
    E(r, 1 + i) = 1.0;
    E(r, 1 + n + i) = 1.0;
    E(r, 1 + 2 * n + i) = 1.0;
    if (is_free[static_cast<std::size_t>(i)]) {
      E(r, 0) = -1.0;
    } else {
      rhs(r) = 1.0;
    }
  }

  SimplexResult res = simplex_solve(cost, E, rhs, opt.max_iter);
  out.iterations = res.iterations;
  switch (res.status) {
    case SimplexStatus::Infeasible: {
      out.status = LpStatus::Infeasible;
      if (res.farkas.size() == rows) out.infeasibility_certificate = res.farkas.head(m);
      return out;
    }
    case SimplexStatus::IterationLimit:
      out.status = LpStatus::NotConverged;
      return out;
    case SimplexStatus::Unbounded:
      out.status = LpStatus::Unbounded;  // cannot happen: objective bounded below by 0
      return out;
    case SimplexStatus::Optimal:
      break;
  }

  out.u = res.x.segment(1, n) - res.x.segment(1 + n, n);
  out.value = res.x(0);
  // Dual of the Au = u1 block. Feasibility requires sum_F |(A'p)_i| <= 1;
  // renormalize tiny violations so the reported gap is a true bound.
  Vector p = res.dual.head(m);
  Vector Atp = A.transpose() * p;
  double s_free = 0.0, s_box = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (is_free[static_cast<std::size_t>(i)])
      s_free += std::abs(Atp(i));
    else
      s_box += std::abs(Atp(i));
  }
  if (s_free > 1.0) {
    p /= s_free;
    Atp /= s_free;
    s_box /= s_free;
  }
  out.dual = p;
  const double dual_obj = p.dot(u1) - s_box;
  out.duality_gap = out.value - dual_obj;
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace

LpSolution solve_inf_norm_eq(const Matrix& A, const Vector& u1, const LpOptions& opt) {
  IndexSet free_idx;
  for (Index i = 0; i < A.cols(); ++i) free_idx.push_back(i);
  return solve_box_impl(A, u1, free_idx, {}, opt);
}

LpSolution solve_inf_norm_box(const Matrix& A, const Vector& u1, const IndexSet& free_idx,
                              const IndexSet& boxed_idx, const LpOptions& opt) {
  return solve_box_impl(A, u1, free_idx, boxed_idx, opt);
}

DualValue dual_value(const Matrix& A, const Vector& a, const LpOptions& opt) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (a.size() != m) throw InvalidInputError("dual_value: length(a) != rows(A)");
  DualValue out;
  if (m == 0) {
    out.value = 0.0;
    return out;
  }
  // max a'p  s.t.  A'p = w, ||w||_1 <= 1, via
  // variables [p+, p-, w+, w-, slack] >= 0.
  const Index nv = 2 * m + 2 * n + 1;
  Matrix E = Matrix::Zero(n + 1, nv);
  Vector rhs = Vector::Zero(n + 1);
  Vector cost = Vector::Zero(nv);
  E.block(0, 0, n, m) = A.transpose();
  E.block(0, m, n, m) = -A.transpose();
  E.block(0, 2 * m, n, n) = -Matrix::Identity(n, n);
  E.block(0, 2 * m + n, n, n) = Matrix::Identity(n, n);
  E.row(n).segment(2 * m, 2 * n).setOnes();
  E(n, nv - 1) = 1.0;
  rhs(n) = 1.0;
  cost.head(m) = -a;
  cost.segment(m, m) = a;

  SimplexResult res = simplex_solve(cost, E, rhs, opt.max_iter);
  switch (res.status) {
    case SimplexStatus::Optimal:
      out.status = LpStatus::Optimal;
      out.value = -res.value;
      return out;
    case SimplexStatus::Unbounded:
      out.status = LpStatus::Unbounded;
      return out;
    case SimplexStatus::Infeasible:
      // p = 0 is always feasible; unreachable.
      throw NotConvergedError("dual_value: unexpected infeasibility");
    case SimplexStatus::IterationLimit:
      throw NotConvergedError("dual_value: iteration limit reached");
  }
  return out;
}

double chebyshev_affine_min(const Matrix& N, const Vector& target, const LpOptions& opt) {
  const Index p = target.size();
  if (N.rows() != p) throw InvalidInputError("chebyshev_affine_min: dimension mismatch");
  if (p == 0) return 0.0;
  const Index d = N.cols();
  if (d == 0) return target.cwiseAbs().maxCoeff();
  // min t  s.t.  w+ - w- + N(a+ - a-) = target, w+_i + w-_i + s_i - t = 0.
  const Index nv = 1 + 2 * p + 2 * d + p;
  Matrix E = Matrix::Zero(2 * p, nv);
  Vector rhs = Vector::Zero(2 * p);
  Vector cost = Vector::Zero(nv);
  cost(0) = 1.0;
  E.block(0, 1, p, p) = Matrix::Identity(p, p);
  E.block(0, 1 + p, p, p) = -Matrix::Identity(p, p);
  E.block(0, 1 + 2 * p, p, d) = N;
  E.block(0, 1 + 2 * p + d, p, d) = -N;
  rhs.head(p) = target;
  for (Index i = 0; i < p; ++i) {
    const Index r = p + i;
    E(r, 1 + i) = 1.0;
    E(r, 1 + p + i) = 1.0;
    E(r, 1 + 2 * p + 2 * d + i) = 1.0;
    E(r, 0) = -1.0;
  }
  SimplexResult res = simplex_solve(cost, E, rhs, opt.max_iter);
  if (res.status != SimplexStatus::Optimal)
    throw NotConvergedError("chebyshev_affine_min: LP did not reach optimality");
  return res.x(0);
}

}  // namespace l1cert::lp
