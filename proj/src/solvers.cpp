#include "l1cert/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "l1cert/linalg.hpp"
#include "l1cert/simplex.hpp"

namespace l1cert::solvers {

namespace {

Vector soft_threshold(const Vector& v, double kappa) {
  return v.unaryExpr([kappa](double t) {
    if (t > kappa) return t - kappa;
    if (t < -kappa) return t + kappa;
    return 0.0;
  });
}

// min 0.5 ||C w + d||^2 over lb <= w <= ub, by a primal active-set loop.
// Finite and essentially exact at desk scale. Returns the residual C w + d.
Vector box_least_squares_residual(const Matrix& C, const Vector& d, const Vector& lb,
                                  const Vector& ub) {
  const Index q = C.cols();
  if (q == 0) return d;
  auto clamp = [&](Vector w) {
    for (Index i = 0; i < q; ++i) w(i) = std::min(std::max(w(i), lb(i)), ub(i));
    return w;
  };
  const double scale = 1.0 + d.cwiseAbs().maxCoeff() + C.cwiseAbs().maxCoeff();
  const double gtol = 1e-12 * scale * scale;
  Vector w = clamp(C.completeOrthogonalDecomposition().solve(-d));

  for (int iter = 0; iter < 300; ++iter) {
    const Vector g = C.transpose() * (C * w + d);
    IndexSet free;
    for (Index i = 0; i < q; ++i) {
      const bool at_lo = w(i) <= lb(i) + 1e-14;
      const bool at_hi = w(i) >= ub(i) - 1e-14;
      if ((at_lo && g(i) > gtol) || (at_hi && g(i) < -gtol)) continue;  // optimally clamped
      free.push_back(i);
    }
    if (free.empty()) break;

    Vector offset = d;
    for (Index i = 0; i < q; ++i)
      if (std::find(free.begin(), free.end(), i) == free.end()) offset += w(i) * C.col(i);
    const Matrix Cf = select_columns(C, free);
    const Vector target = Cf.completeOrthogonalDecomposition().solve(-offset);

    double step = 1.0;
    bool moved = false;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const Index i = free[k];
      const double delta = target(static_cast<Index>(k)) - w(i);
      if (std::abs(delta) > 1e-15) moved = true;
      if (delta > 0 && w(i) + step * delta > ub(i)) step = (ub(i) - w(i)) / delta;
      if (delta < 0 && w(i) + step * delta < lb(i)) step = (lb(i) - w(i)) / delta;
    }
    if (!moved) {
      // Interior stationary point on the free set; KKT holds.
      break;
    }
    for (std::size_t k = 0; k < free.size(); ++k) {
      const Index i = free[k];
      w(i) = w(i) + step * (target(static_cast<Index>(k)) - w(i));
    }
    w = clamp(w);
  }
  return C * w + d;
}

// Dual-feasibility residual for the penalized model at x: the closest point
// to zero of  2 Phi'(Phi x - b) + lambda Psi y  over subgradients y of the
// l1 norm at Psi'x.
double lasso_kkt_residual(const Matrix& phi, const Matrix& psi, const Vector& b, double lambda,
                          const Vector& x) {
  const Vector z = psi.transpose() * x;
  const Vector g = 2.0 * phi.transpose() * (phi * x - b);
  const double zt = 1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff());
  Vector d = g;
  IndexSet free_cols;
  for (Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > zt)
      d += lambda * (z(i) > 0 ? 1.0 : -1.0) * psi.col(i);
    else
      free_cols.push_back(i);
  }
  const Matrix C = lambda * select_columns(psi, free_cols);
  const Index q = C.cols();
  const Vector r = box_least_squares_residual(C, d, Vector::Constant(q, -1.0),
                                              Vector::Constant(q, 1.0));
  return r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
}

// KKT residual for the constrained model: stationarity of the l1 objective
// against the normal cone of the residual ball at x.
double bpdn_kkt_residual(const Matrix& phi, const Matrix& psi, const Vector& b, double delta,
                         const Vector& x) {
  const Vector z = psi.transpose() * x;
  const Vector res = phi * x - b;
  const double rn = res.norm();
  const double feas_viol = std::max(0.0, rn - delta);
  const double zt = 1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff());
  Vector d = Vector::Zero(x.size());
  IndexSet free_cols;
  for (Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > zt)
      d += (z(i) > 0 ? 1.0 : -1.0) * psi.col(i);
    else
      free_cols.push_back(i);
  }
  Matrix C(x.size(), static_cast<Index>(free_cols.size()) + 1);
  C.leftCols(C.cols() - 1) = select_columns(psi, free_cols);
  C.col(C.cols() - 1) = rn > 0 ? Vector(phi.transpose() * res / rn) : Vector::Zero(x.size());
  Vector lb = Vector::Constant(C.cols(), -1.0);
  Vector ub = Vector::Constant(C.cols(), 1.0);
  lb(C.cols() - 1) = 0.0;
  ub(C.cols() - 1) = std::numeric_limits<double>::infinity();
  // The constraint multiplier is only active on the sphere.
  if (rn < delta * (1.0 - 1e-12)) ub(C.cols() - 1) = 0.0;
  const Vector r = box_least_squares_residual(C, d, lb, ub);
  const double stat = r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  return std::max(stat, feas_viol);
}

struct SupportGuess {
  IndexSet I;
  IndexSet J;
  Vector sign_I;
};

SupportGuess support_from(const Vector& z, Index l) {
  SupportGuess g;
  const double tol = 1e-10 * std::max(1.0, z.cwiseAbs().maxCoeff());
  std::vector<double> s;
  for (Index i = 0; i < l; ++i) {
    if (std::abs(z(i)) > tol) {
      g.I.push_back(i);
      s.push_back(z(i) > 0 ? 1.0 : -1.0);
    } else {
      g.J.push_back(i);
    }
  }
  g.sign_I = Eigen::Map<const Vector>(s.data(), static_cast<Index>(s.size()));
  return g;
}

// Exact minimizer of the penalized model restricted to Psi_J'x = 0 with the
// sign pattern fixed; nullopt when the guess does not validate.
std::optional<Vector> polish_lasso(const Matrix& phi, const Matrix& psi, const Vector& b,
                                   double lambda, const SupportGuess& g, double accept_tol) {
  const Matrix psiJt = select_columns(psi, g.J).transpose();
  const Matrix U = linalg::nullspace_basis(psiJt);
  Vector x;
  if (U.cols() == 0) {
    x = Vector::Zero(psi.rows());
  } else {
    const Matrix M = phi * U;
    const Vector c = g.I.empty() ? Vector(Vector::Zero(U.cols()))
                                 : Vector(U.transpose() * (select_columns(psi, g.I) * g.sign_I));
    const Matrix H = M.transpose() * M;
    const Vector rhs = M.transpose() * b - 0.5 * lambda * c;
    const Vector alpha = H.completeOrthogonalDecomposition().solve(rhs);
    x = U * alpha;
  }
  // Sign consistency on the guessed support.
  const Vector z = psi.transpose() * x;
  const double zt = 1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < g.I.size(); ++i) {
    const double zi = z(g.I[i]);
    if (std::abs(zi) > zt && zi * g.sign_I(static_cast<Index>(i)) < 0) return std::nullopt;
  }
  if (lasso_kkt_residual(phi, psi, b, lambda, x) > accept_tol) return std::nullopt;
  return x;
}

std::optional<Vector> polish_bpdn(const Matrix& phi, const Matrix& psi, const Vector& b,
                                  double delta, const SupportGuess& g, double accept_tol) {
  const Matrix psiJt = select_columns(psi, g.J).transpose();
  const Matrix U = linalg::nullspace_basis(psiJt);
  if (U.cols() == 0) {
    const Vector x = Vector::Zero(psi.rows());
    if (b.norm() > delta * (1.0 + 1e-9) + 1e-15) return std::nullopt;
    return x;
  }
  const Matrix M = phi * U;
  const Matrix H = M.transpose() * M;
  Eigen::LDLT<Matrix> ldlt(H);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  if (linalg::numerical_rank(M) < M.cols()) return std::nullopt;
  const Vector alpha_ls = ldlt.solve(M.transpose() * b);
  const double r0 = (M * alpha_ls - b).norm();
  const Vector c = g.I.empty() ? Vector(Vector::Zero(U.cols()))
                               : Vector(U.transpose() * (select_columns(psi, g.I) * g.sign_I));
  Vector alpha = alpha_ls;
  const double q = c.dot(ldlt.solve(c));
  if (delta > r0 && q > 1e-30) {
    const double t = std::sqrt((delta * delta - r0 * r0) / q);
    alpha -= t * ldlt.solve(c);
  } else if (delta < r0 * (1.0 - 1e-12)) {
    return std::nullopt;  // restricted problem infeasible: wrong support
  }
  const Vector x = U * alpha;
  const Vector z = psi.transpose() * x;
  const double zt = 1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < g.I.size(); ++i) {
    const double zi = z(g.I[i]);
    if (std::abs(zi) > zt && zi * g.sign_I(static_cast<Index>(i)) < 0) return std::nullopt;
  }
  if (bpdn_kkt_residual(phi, psi, b, delta, x) > accept_tol) return std::nullopt;
  return x;
}

}  // namespace

SolveResult solve_bp(const Matrix& phi, const Matrix& psi, const Vector& b,
                     const SolverOptions& opt) {
  const Index m = phi.rows();
  const Index n = phi.cols();
  const Index l = psi.cols();
  if (psi.rows() != n || b.size() != m) throw InvalidInputError("solve_bp: dimension mismatch");

  // Variables [x+, x-, z+, z-]; rows [Psi'x - z = 0; Phi x = b].
  const Index nv = 2 * n + 2 * l;
  Matrix E = Matrix::Zero(l + m, nv);
  Vector rhs = Vector::Zero(l + m);
  Vector cost = Vector::Zero(nv);
  E.block(0, 0, l, n) = psi.transpose();
  E.block(0, n, l, n) = -psi.transpose();
  E.block(0, 2 * n, l, l) = -Matrix::Identity(l, l);
  E.block(0, 2 * n + l, l, l) = Matrix::Identity(l, l);
  E.block(l, 0, m, n) = phi;
  E.block(l, n, m, n) = -phi;
  rhs.tail(m) = b;
  cost.segment(2 * n, 2 * l).setOnes();

  lp::SimplexResult res = lp::simplex_solve(cost, E, rhs, opt.max_iter);
  if (res.status == lp::SimplexStatus::Infeasible)
    throw InfeasibleError("solve_bp: b is not in the range of Phi");
  if (res.status != lp::SimplexStatus::Optimal)
    throw NotConvergedError("solve_bp: LP did not reach optimality");

  SolveResult out;
  out.x = res.x.head(n) - res.x.segment(n, n);
  out.objective = (psi.transpose() * out.x).lpNorm<1>();
  out.iterations = res.iterations;
  const Vector nu = res.dual.head(l);
  const Vector beta = res.dual.tail(m);
  const double primal_feas = (phi * out.x - b).cwiseAbs().maxCoeff();
  const double dual_feas = (psi * nu + phi.transpose() * beta).cwiseAbs().maxCoeff();
  const double dual_box = std::max(0.0, nu.cwiseAbs().maxCoeff() - 1.0);
  const double gap = std::abs(out.objective - b.dot(beta));
  out.kkt_residual = std::max({primal_feas, dual_feas, dual_box, gap});
  out.converged = out.kkt_residual <= opt.solver_tol;
  return out;
}

SolveResult solve_lasso(const Matrix& phi, const Matrix& psi, const Vector& b, double lambda,
                        const SolverOptions& opt) {
  if (lambda <= 0) throw InvalidInputError("solve_lasso: lambda must be positive");
  const Index n = phi.cols();
  const Index l = psi.cols();
  if (psi.rows() != n || b.size() != phi.rows())
    throw InvalidInputError("solve_lasso: dimension mismatch");

  const double accept_tol = 1e-10 * (1.0 + 2.0 * (phi.transpose() * b).cwiseAbs().maxCoeff() + lambda);

  double rho = std::max(lambda, 1e-2);
  Matrix H = 2.0 * phi.transpose() * phi + rho * psi * psi.transpose();
  Eigen::LDLT<Matrix> ldlt(H);
  const Vector x_init = opt.x0 ? *opt.x0 : Vector(Vector::Zero(n));
  Vector z = psi.transpose() * x_init;
  Vector u = Vector::Zero(l);
  Vector x = x_init;

  SolveResult out;
  const int check_every = 250;
  for (int it = 0; it < opt.max_iter; ++it) {
    x = ldlt.solve(2.0 * phi.transpose() * b + rho * psi * (z - u));
    const Vector zx = psi.transpose() * x;
    const Vector z_old = z;
    z = soft_threshold(zx + u, lambda / rho);
    u += zx - z;
    out.iterations = it + 1;

    if ((it + 1) % check_every == 0 || it + 1 == opt.max_iter) {
      const auto guess = support_from(z, l);
      if (auto pol = polish_lasso(phi, psi, b, lambda, guess, accept_tol)) {
        out.x = *pol;
        out.objective =
            (phi * out.x - b).squaredNorm() + lambda * (psi.transpose() * out.x).lpNorm<1>();
        out.kkt_residual = lasso_kkt_residual(phi, psi, b, lambda, out.x);
        out.converged = true;
        return out;
      }
      // Residual balancing keeps the splitting progressing.
      const double rp = (zx - z).norm();
      const double rd = rho * (psi * (z - z_old)).norm();
      if (rp > 10.0 * rd || rd > 10.0 * rp) {
        rho *= (rp > rd) ? 2.0 : 0.5;
        H = 2.0 * phi.transpose() * phi + rho * psi * psi.transpose();
        ldlt.compute(H);
        u *= (rp > rd) ? 0.5 : 2.0;
      }
    }
  }
  out.x = x;
  out.objective = (phi * x - b).squaredNorm() + lambda * (psi.transpose() * x).lpNorm<1>();
  out.kkt_residual = lasso_kkt_residual(phi, psi, b, lambda, x);
  out.converged = out.kkt_residual <= opt.solver_tol;
  return out;
}

SolveResult solve_bpdn(const Matrix& phi, const Matrix& psi, const Vector& b, double delta,
                       const SolverOptions& opt) {
  if (delta < 0) throw InvalidInputError("solve_bpdn: delta must be nonnegative");
  const Index n = phi.cols();
  const Index l = psi.cols();
  if (psi.rows() != n || b.size() != phi.rows())
    throw InvalidInputError("solve_bpdn: dimension mismatch");
  if (delta < 1e-15) return solve_bp(phi, psi, b, opt);

  {
    // Infeasible when even the least-squares residual exceeds delta.
    const Vector xls = phi.completeOrthogonalDecomposition().solve(b);
    if ((phi * xls - b).norm() > delta * (1.0 + 1e-9) + 1e-12)
      throw InfeasibleError("solve_bpdn: no x satisfies the residual constraint");
  }
  SolveResult out;
  if (b.norm() <= delta * (1.0 + 1e-12)) {
    out.x = Vector::Zero(n);
    out.objective = 0.0;
    out.kkt_residual = 0.0;
    out.converged = true;
    return out;
  }

  const double accept_tol = 1e-10 * (1.0 + psi.cwiseAbs().maxCoeff());
  double rho = 1.0;
  Matrix H = psi * psi.transpose() + phi.transpose() * phi;
  Eigen::LDLT<Matrix> ldlt(H);
  const Vector x_init = opt.x0 ? *opt.x0 : Vector(Vector::Zero(n));
  Vector z = psi.transpose() * x_init;
  Vector r = phi * x_init - b;
  if (r.norm() > delta) r *= delta / r.norm();
  Vector uz = Vector::Zero(l);
  Vector ur = Vector::Zero(b.size());
  Vector x = x_init;

  const int check_every = 250;
  for (int it = 0; it < opt.max_iter; ++it) {
    x = ldlt.solve(psi * (z - uz) + phi.transpose() * (b + r - ur));
    const Vector zx = psi.transpose() * x;
    const Vector rx = phi * x - b;
    z = soft_threshold(zx + uz, 1.0 / rho);
    Vector rr = rx + ur;
    const double rrn = rr.norm();
    r = (rrn > delta) ? Vector(rr * (delta / rrn)) : rr;
    uz += zx - z;
    ur += rx - r;
    out.iterations = it + 1;

    if ((it + 1) % check_every == 0 || it + 1 == opt.max_iter) {
      const auto guess = support_from(z, l);
      if (auto pol = polish_bpdn(phi, psi, b, delta, guess, accept_tol)) {
        out.x = *pol;
        out.objective = (psi.transpose() * out.x).lpNorm<1>();
        out.kkt_residual = bpdn_kkt_residual(phi, psi, b, delta, out.x);
        out.converged = true;
        return out;
      }
    }
  }
  out.x = x;
  out.objective = (psi.transpose() * x).lpNorm<1>();
  out.kkt_residual = bpdn_kkt_residual(phi, psi, b, delta, x);
  out.converged = out.kkt_residual <= opt.solver_tol;
  return out;
}

UniquenessVerdict uniqueness_oracle(const Matrix& phi, const Matrix& psi, const Vector& b,
                                    double optimal_value, const OracleOptions& opt) {
  const Index m = phi.rows();
  const Index n = phi.cols();
  const Index l = psi.cols();
  const double budget = optimal_value + 1e-11 * (1.0 + optimal_value);

  // Variables [x+, x-, z+, z-, slack]; the optimal face is
  // {Phi x = b, ||Psi'x||_1 <= v*}.
  const Index nv = 2 * n + 2 * l + 1;
  Matrix E = Matrix::Zero(l + m + 1, nv);
  Vector rhs = Vector::Zero(l + m + 1);
  E.block(0, 0, l, n) = psi.transpose();
  E.block(0, n, l, n) = -psi.transpose();
  E.block(0, 2 * n, l, l) = -Matrix::Identity(l, l);
  E.block(0, 2 * n + l, l, l) = Matrix::Identity(l, l);
  E.block(l, 0, m, n) = phi;
  E.block(l, n, m, n) = -phi;
  rhs.segment(l, m) = b;
  E.row(l + m).segment(2 * n, 2 * l).setOnes();
  E(l + m, nv - 1) = 1.0;
  rhs(l + m) = budget;

  UniquenessVerdict out;
  out.optimal_value = optimal_value;
  double worst = 0.0;
  Vector wit_lo, wit_hi;
  for (Index i = 0; i < n; ++i) {
    double lo = 0.0, hi = 0.0;
    Vector x_lo, x_hi;
    for (int sgn : {+1, -1}) {
      Vector cost = Vector::Zero(nv);
      cost(i) = -static_cast<double>(sgn);
      cost(n + i) = static_cast<double>(sgn);
      lp::SimplexResult res = lp::simplex_solve(cost, E, rhs);
      if (res.status != lp::SimplexStatus::Optimal)
        throw NotConvergedError("uniqueness_oracle: face LP failed");
      const Vector x = res.x.head(n) - res.x.segment(n, n);
      if (sgn > 0) {
        hi = -res.value;
        x_hi = x;
      } else {
        lo = res.value;  // min x_i
        x_lo = x;
      }
    }
    const double spread = hi - lo;
    if (spread > worst) {
      worst = spread;
      wit_lo = x_lo;
      wit_hi = x_hi;
    }
  }
  out.face_diameter = worst;
  out.unique = worst <= opt.oracle_tol;
  out.ambiguous = worst > opt.oracle_tol && worst < opt.ambiguous_band;
  if (!out.unique && wit_lo.size() > 0) out.witness_pair = std::make_pair(wit_lo, wit_hi);
  return out;
}

ProbeResult solution_set_probe(const Matrix& phi, const Matrix& psi, const Vector& b,
                               PenalizedModel model, double lambda_or_delta, int n_starts,
                               std::uint64_t seed, const SolverOptions& opt) {
  if (n_starts < 2) throw InvalidInputError("solution_set_probe: n_starts >= 2 required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Vector> residuals;
  std::vector<double> objectives;
  for (int s = 0; s < n_starts; ++s) {
    Vector x0(phi.cols());
    for (Index i = 0; i < x0.size(); ++i) x0(i) = gauss(rng);
    SolverOptions o = opt;
    o.x0 = x0;
    const SolveResult r = (model == PenalizedModel::Lasso)
                              ? solve_lasso(phi, psi, b, lambda_or_delta, o)
                              : solve_bpdn(phi, psi, b, lambda_or_delta, o);
    residuals.push_back(phi * r.x - b);
    objectives.push_back((psi.transpose() * r.x).lpNorm<1>());
  }
  ProbeResult out;
  for (std::size_t a = 0; a < residuals.size(); ++a) {
    for (std::size_t c = a + 1; c < residuals.size(); ++c) {
      out.max_residual_spread =
          std::max(out.max_residual_spread, (residuals[a] - residuals[c]).norm());
      out.max_objective_spread =
          std::max(out.max_objective_spread, std::abs(objectives[a] - objectives[c]));
    }
  }
  return out;
}

}  // namespace l1cert::solvers
