#include "l1cert/compare.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdint>
#include <limits>

#include "l1cert/linalg.hpp"
#include "l1cert/lp.hpp"

namespace l1cert::compare {

namespace {

struct OmegaPieces {
  Matrix omega;    // |J| x |I|
  Matrix A_J;      // n x n
  Matrix kerPsiJ;  // basis of Ker(Psi_J) in R^{|J|}
};

OmegaPieces build_omega(const Matrix& phi, const Matrix& psi, const IndexSet& I,
                        const IndexSet& J) {
  OmegaPieces out;
  const Index n = psi.rows();
  const Matrix psiJ = select_columns(psi, J);  // n x |J|
  const Matrix psiI = select_columns(psi, I);
  const Matrix U = linalg::nullspace_basis(Matrix(psiJ.transpose()));
  if (U.cols() > 0) {
    const Matrix G = U.transpose() * phi.transpose() * phi * U;
    Eigen::FullPivLU<Matrix> lu(G);
    if (!lu.isInvertible())
      throw UnboundedRatioError("kernel condition violated: U'Phi'Phi U is singular");
    out.A_J = U * lu.solve(U.transpose());
  } else {
    out.A_J = Matrix::Zero(n, n);
  }
  const Matrix psiJ_pinv = linalg::pseudo_inverse(psiJ);  // |J| x n
  out.omega = psiJ_pinv * (phi.transpose() * phi * out.A_J - Matrix::Identity(n, n)) * psiI;
  out.kerPsiJ = linalg::nullspace_basis(psiJ);
  return out;
}

}  // namespace

Cond2Result eval_condition2(const Matrix& phi, const Matrix& psi,
                            const certify::SupportPattern& pattern, double strict_tol) {
  Cond2Result out;
  const Matrix Q = linalg::nullspace_basis(phi);
  if (Q.cols() == 0) {
    // Trivial kernel: the condition is vacuous.
    out.rank_ok = true;
    out.value = 0.0;
    out.holds = true;
    return out;
  }
  const IndexSet Ic = complement(pattern.I, psi.cols());
  const Matrix psiIc = select_columns(psi, Ic);
  out.rank_ok =
      linalg::numerical_rank(Matrix(psiIc.transpose() * Q)) == Q.cols();
  const Vector rhs = pattern.I.empty()
                         ? Vector(Vector::Zero(Q.cols()))
                         : Vector(Q.transpose() * (select_columns(psi, pattern.I) * pattern.sign_I));
  const Vector v = linalg::pseudo_inverse(Matrix(Q.transpose() * psiIc)) * rhs;
  out.value = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
  out.holds = out.rank_ok && out.value < 1.0 - strict_tol;
  return out;
}

Cond4Result eval_condition4_IC(const Matrix& phi, const Matrix& psi,
                               const certify::SupportPattern& pattern, double strict_tol) {
  Cond4Result out;
  const auto pieces = build_omega(phi, psi, pattern.I, pattern.J);
  out.omega = pieces.omega;
  const Vector target = pattern.I.empty()
                            ? Vector(Vector::Zero(pieces.omega.rows()))
                            : Vector(pieces.omega * pattern.sign_I);
  out.ic = lp::chebyshev_affine_min(pieces.kerPsiJ, target);
  const bool kernel_ok = certify::check_kernel_condition(phi, psi, pattern.J).ok;
  out.holds = kernel_ok && out.ic < 1.0 - strict_tol;
  return out;
}

Cond5Result eval_condition5_RC(const Matrix& phi, const Matrix& psi, const IndexSet& I,
                               const IndexSet& J, double strict_tol, int vertex_budget_bits) {
  Cond5Result out;
  const auto pieces = build_omega(phi, psi, I, J);
  const Index k = static_cast<Index>(I.size());

  // The inner minimum is convex in p, so the max over the cube is attained
  // at a sign vertex.
  if (k <= vertex_budget_bits) {
    const std::uint64_t count = k == 0 ? 1 : (1ull << (k - 1));  // +-p symmetry
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      Vector p = Vector::Ones(k);
      for (Index i = 0; i + 1 < k; ++i)
        if (mask & (1ull << i)) p(i + 1) = -1.0;
      const Vector target = k == 0 ? Vector(Vector::Zero(pieces.omega.rows()))
                                   : Vector(pieces.omega * p);
      out.rc = std::max(out.rc, lp::chebyshev_affine_min(pieces.kerPsiJ, target));
    }
  } else {
    out.exact = false;  // sampled lower bound only
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int s = 0; s < (1 << vertex_budget_bits); ++s) {
      Vector p(k);
      for (Index i = 0; i < k; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        p(i) = (state >> 63) ? 1.0 : -1.0;
      }
      out.rc = std::max(out.rc, lp::chebyshev_affine_min(pieces.kerPsiJ, Vector(pieces.omega * p)));
    }
  }

  const Matrix cJ_mat = linalg::pseudo_inverse(select_columns(psi, J)) * phi.transpose() *
                        (phi * pieces.A_J * phi.transpose() -
                         Matrix::Identity(phi.rows(), phi.rows()));
  for (Index r = 0; r < cJ_mat.rows(); ++r)
    out.c_J = std::max(out.c_J, cJ_mat.row(r).norm());

  const bool kernel_ok = certify::check_kernel_condition(phi, psi, J).ok;
  out.holds = out.exact && kernel_ok && out.rc < 1.0 - strict_tol;
  return out;
}

std::optional<double> suggested_lambda(const Cond5Result& c5, double noise_norm,
                                       double rho_factor) {
  if (!(c5.rc < 1.0) || rho_factor <= 1.0) return std::nullopt;
  return rho_factor * noise_norm * c5.c_J / (2.0 * (1.0 - c5.rc));
}

Cond3Result eval_condition3(const Matrix& phi, const Matrix& psi, const Vector& y, double t) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidInputError("condition 3 requires t in (0,1)");
  Cond3Result out;
  out.t_used = t;
  const Matrix G = psi * psi.transpose();
  Eigen::FullPivLU<Matrix> lu(G);
  if (!lu.isInvertible())
    throw AssumptionError("condition 3 requires Psi Psi' to be invertible");
  const Matrix psi_hat = lu.solve(psi);  // (Psi Psi')^{-1} Psi
  for (Index i = 0; i < y.size(); ++i)
    if (std::abs(y(i)) > t) out.I_t.push_back(i);
  if (out.I_t.empty()) {
    out.holds = true;  // empty span: injective vacuously
    return out;
  }
  const Matrix B = linalg::range_basis(select_columns(psi_hat, out.I_t));
  const auto sm = linalg::subspace_metrics(phi, B);
  const double tol = 1e-10 * std::max(1.0, linalg::matrix_metrics(phi).spectral_norm);
  out.holds = sm.sigma_min > tol;
  return out;
}

ComparisonReport implication_tests(const certify::ProblemInstance& instance,
                                   const Vector& x_bar, const certify::Tolerances& tol) {
  ComparisonReport rep;
  rep.cond1 = certify::verify_condition1(instance, x_bar, tol);
  const auto& pattern = rep.cond1.pattern;

  rep.cond2 = eval_condition2(instance.phi, instance.psi, pattern, tol.strict_tol);
  try {
    rep.cond4 = eval_condition4_IC(instance.phi, instance.psi, pattern, tol.strict_tol);
    rep.cond5 =
        eval_condition5_RC(instance.phi, instance.psi, pattern.I, pattern.J, tol.strict_tol);
  } catch (const UnboundedRatioError&) {
    rep.cond4.holds = false;
    rep.cond5.holds = false;
    rep.cond4.ic = std::numeric_limits<double>::infinity();
    rep.cond5.rc = std::numeric_limits<double>::infinity();
  }

  const bool unique = rep.cond1.verdict == certify::Verdict::Unique;
  const bool marginal = rep.cond1.verdict == certify::Verdict::Marginal;
  if (rep.cond2.holds && !unique && !marginal)
    rep.violations.push_back("condition 2 holds but the main verification is not Unique");
  if (rep.cond4.holds && !unique && !marginal)
    rep.violations.push_back("condition 4 holds but the main verification is not Unique");
  if (rep.cond5.holds && !rep.cond4.holds)
    rep.violations.push_back("condition 5 holds but condition 4 does not");
  if (rep.cond5.exact && std::isfinite(rep.cond4.ic) && rep.cond5.rc < rep.cond4.ic - 1e-10)
    rep.violations.push_back("RC is smaller than IC");

  // Condition 3 over a t-grid at the certificate's y; when it holds the
  // relaxed-index-set variant must hold with J = I(t)^c.
  if (rep.cond1.certificate) {
    const Vector& y = rep.cond1.certificate->y;
    for (int k = 1; k <= 9; ++k) {
      const double t = 0.1 * k;
      Cond3Result c3;
      try {
        c3 = eval_condition3(instance.phi, instance.psi, y, t);
      } catch (const AssumptionError&) {
        break;
      }
      if (!rep.cond3 || (c3.holds && !rep.cond3->holds)) rep.cond3 = c3;
      if (!c3.holds) continue;
      const IndexSet Jt = complement(c3.I_t, instance.psi.cols());
      if (Jt.empty()) continue;
      const auto r1p = certify::verify_condition1_prime(instance, x_bar, Jt, tol);
      if (r1p.verdict == certify::Verdict::NotUnique)
        rep.violations.push_back("condition 3 holds at t=" + std::to_string(t) +
                                 " but the relaxed certificate fails on J = I(t)^c");
    }
  }
  return rep;
}

}  // namespace l1cert::compare
