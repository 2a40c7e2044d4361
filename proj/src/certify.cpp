#include "l1cert/certify.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "l1cert/linalg.hpp"

namespace l1cert::certify {

namespace {

Matrix kernel_basis_of(const Matrix& M, double rank_tol) {
  return rank_tol > 0 ? linalg::nullspace_basis(M, rank_tol) : linalg::nullspace_basis(M);
}

Vector solve_beta(const Matrix& phi, const Matrix& psi, const Vector& y) {
  const Matrix G = phi * phi.transpose();
  Eigen::LDLT<Matrix> ldlt(G);
  if (ldlt.info() != Eigen::Success || linalg::numerical_rank(phi) < phi.rows())
    throw AssumptionError("Phi must have full row rank to recover the multiplier beta");
  return ldlt.solve(phi * (psi * y));
}

}  // namespace

SupportPattern extract_support(const Matrix& psi, const Vector& x, double supp_tol) {
  if (supp_tol < 0) throw InvalidInputError("supp_tol must be nonnegative");
  if (!x.allFinite() || !psi.allFinite()) throw InvalidInputError("non-finite input");
  const Vector z = psi.transpose() * x;
  SupportPattern p;
  const double zmax = z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0;
  const double cut = supp_tol * zmax;
  std::vector<double> signs;
  for (Index i = 0; i < z.size(); ++i) {
    if (zmax > 0 && std::abs(z(i)) > cut) {
      p.I.push_back(i);
      signs.push_back(z(i) > 0 ? 1.0 : -1.0);
    } else {
      p.J.push_back(i);
    }
  }
  p.sign_I = Eigen::Map<const Vector>(signs.data(), static_cast<Index>(signs.size()));
  return p;
}

KernelCheck check_kernel_condition(const Matrix& phi, const Matrix& psi, const IndexSet& J,
                                   double rank_tol) {
  const Matrix Q = kernel_basis_of(phi, rank_tol);
  KernelCheck out;
  if (Q.cols() == 0) {
    out.ok = true;
    return out;
  }
  const Matrix psiJtQ = select_columns(psi, J).transpose() * Q;  // |J| x k
  const Index rank = rank_tol > 0 ? linalg::numerical_rank(psiJtQ, rank_tol)
                                  : linalg::numerical_rank(psiJtQ);
  out.ok = (rank == Q.cols());
  if (!out.ok) {
    const Matrix N = rank_tol > 0 ? linalg::nullspace_basis(psiJtQ, rank_tol)
                                  : linalg::nullspace_basis(psiJtQ);
    Vector w = Q * N.col(0);
    out.witness = w / w.norm();
  }
  return out;
}

CertificateSearch find_certificate(const Matrix& phi, const Matrix& psi,
                                   const SupportPattern& pattern, const Tolerances& tol) {
  const Index l = psi.cols();
  const Matrix Q = kernel_basis_of(phi, tol.rank_tol);

  CertificateSearch out;
  const Matrix psiI = select_columns(psi, pattern.I);
  auto assemble = [&](const Vector& u_JK) {
    Vector y = Vector::Zero(l);
    for (std::size_t i = 0; i < pattern.I.size(); ++i)
      y(pattern.I[i]) = pattern.sign_I(static_cast<Index>(i));
    Index c = 0;
    for (Index j : pattern.J) y(j) = u_JK(c++);
    for (Index k : pattern.K) y(k) = u_JK(c++);
    DualCertificate cert;
    cert.y = y;
    double yJ_inf = 0.0;
    for (Index j : pattern.J) yJ_inf = std::max(yJ_inf, std::abs(y(j)));
    cert.gap = 1.0 - yJ_inf;
    cert.range_residual =
        Q.cols() > 0 ? (Q.transpose() * (psi * y)).cwiseAbs().maxCoeff() : 0.0;
    cert.sign_match = true;
    cert.beta = solve_beta(phi, psi, y);
    return cert;
  };

  if (Q.cols() == 0) {
    // Trivial kernel: the range constraint is vacuous; y = sign on I, 0 off it.
    out.lp_status = lp::LpStatus::Optimal;
    out.lp_value = 0.0;
    out.certificate = assemble(Vector::Zero(static_cast<Index>(pattern.J.size() + pattern.K.size())));
    return out;
  }

  const Vector u1 = pattern.I.empty()
                        ? Vector(Vector::Zero(Q.cols()))
                        : Vector(-(Q.transpose() * psiI) * pattern.sign_I);

  if (pattern.J.empty() && pattern.K.empty()) {
    // Full support: a certificate exists iff Q' Psi_I sign = 0 already.
    out.lp_status = (u1.cwiseAbs().maxCoeff() <= tol.feas_tol) ? lp::LpStatus::Optimal
                                                               : lp::LpStatus::Infeasible;
    out.lp_value = 0.0;
    if (out.lp_status == lp::LpStatus::Optimal) out.certificate = assemble(Vector());
    return out;
  }

  IndexSet cols = pattern.J;
  cols.insert(cols.end(), pattern.K.begin(), pattern.K.end());
  const Matrix A = Q.transpose() * select_columns(psi, cols);

  lp::LpOptions lpopt;
  lpopt.feas_tol = tol.feas_tol;
  lp::LpSolution sol;
  if (pattern.K.empty()) {
    sol = lp::solve_inf_norm_eq(A, u1, lpopt);
  } else {
    IndexSet free_idx, boxed_idx;
    for (Index i = 0; i < static_cast<Index>(pattern.J.size()); ++i) free_idx.push_back(i);
    for (Index i = static_cast<Index>(pattern.J.size()); i < A.cols(); ++i)
      boxed_idx.push_back(i);
    sol = lp::solve_inf_norm_box(A, u1, free_idx, boxed_idx, lpopt);
  }
  out.lp_status = sol.status;
  out.lp_value = sol.value;
  if (sol.status == lp::LpStatus::Optimal && sol.value < 1.0 - tol.strict_tol)
    out.certificate = assemble(sol.u);
  return out;
}

namespace {

ConditionReport run_verification(const ProblemInstance& instance, SupportPattern pattern,
                                 const Tolerances& tol) {
  ConditionReport report;
  report.tol = tol;
  report.pattern = pattern;

  const KernelCheck kc =
      check_kernel_condition(instance.phi, instance.psi, pattern.J, tol.rank_tol);
  report.kernel_ok = kc.ok;
  if (!kc.ok) {
    report.verdict = Verdict::NotUnique;
    return report;
  }

  CertificateSearch cs = find_certificate(instance.phi, instance.psi, pattern, tol);
  report.lp_status = cs.lp_status;
  report.lp_value = cs.lp_value;
  report.certificate = std::move(cs.certificate);

  if (report.lp_status == lp::LpStatus::NotConverged)
    throw NotConvergedError("certificate LP hit the iteration limit");
  if (report.lp_status != lp::LpStatus::Optimal) {
    report.verdict = Verdict::NotUnique;  // no y with the required sign block exists
    return report;
  }
  if (std::abs(report.lp_value - 1.0) <= tol.strict_tol)
    report.verdict = Verdict::Marginal;
  else if (report.lp_value < 1.0)
    report.verdict = Verdict::Unique;
  else
    report.verdict = Verdict::NotUnique;
  return report;
}

}  // namespace

ConditionReport verify_condition1(const ProblemInstance& instance, const Vector& x_bar,
                                  const Tolerances& tol) {
  if (!x_bar.allFinite()) throw InvalidInputError("x_bar must be finite");
  SupportPattern pattern = extract_support(instance.psi, x_bar, tol.supp_tol);
  return run_verification(instance, std::move(pattern), tol);
}

ConditionReport verify_condition1_prime(const ProblemInstance& instance, const Vector& x_bar,
                                        const IndexSet& J, const Tolerances& tol) {
  if (!x_bar.allFinite()) throw InvalidInputError("x_bar must be finite");
  if (J.empty()) throw InvalidInputError("Condition 1' requires a nonempty J");
  SupportPattern base = extract_support(instance.psi, x_bar, tol.supp_tol);
  std::vector<bool> inI(static_cast<std::size_t>(instance.psi.cols()), false);
  for (Index i : base.I) inI[static_cast<std::size_t>(i)] = true;
  for (Index j : J)
    if (j < 0 || j >= instance.psi.cols() || inI[static_cast<std::size_t>(j)])
      throw InvalidInputError("J must be a subset of the complement of the support");

  SupportPattern pattern;
  pattern.I = base.I;
  pattern.sign_I = base.sign_I;
  pattern.J = J;
  std::sort(pattern.J.begin(), pattern.J.end());
  IndexSet IJ = pattern.I;
  IJ.insert(IJ.end(), pattern.J.begin(), pattern.J.end());
  pattern.K = complement(IJ, instance.psi.cols());
  return run_verification(instance, std::move(pattern), tol);
}

AssumptionsCheck check_assumptions(const Matrix& phi, const Matrix& psi) {
  AssumptionsCheck out;
  out.a1 = linalg::numerical_rank(phi) == phi.rows();
  out.a3 = linalg::numerical_rank(psi) == psi.rows();
  const double smax = linalg::matrix_metrics(psi).spectral_norm;
  out.a2 = std::abs(smax * smax - 1.0) <= 1e-9;
  out.psi_scale = smax > 0 ? 1.0 / smax : 1.0;
  return out;
}

}  // namespace l1cert::certify
