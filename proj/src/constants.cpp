#include "l1cert/constants.hpp"

#include <cmath>
#include <limits>

#include "l1cert/linalg.hpp"

namespace l1cert::constants {

double r_of_J(const Matrix& phi, const Matrix& psi, const IndexSet& J) {
  const Matrix psiJt = select_columns(psi, J).transpose();  // |J| x n
  const Matrix U = linalg::nullspace_basis(psiJt);
  if (U.cols() == 0) return 0.0;  // empty supremum
  const auto sm = linalg::subspace_metrics(phi, U);
  const double tol = 1e-12 * std::max(1.0, linalg::matrix_metrics(phi).spectral_norm);
  if (sm.sigma_min <= tol)
    throw UnboundedRatioError("Ker(Psi_J') meets Ker(Phi): r(J) is unbounded");
  return 1.0 / sm.sigma_min;
}

RobustnessConstants robustness_constants(const Matrix& phi, const Matrix& psi,
                                         const certify::DualCertificate& cert,
                                         const certify::SupportPattern& pattern,
                                         std::optional<double> C0_in) {
  if (cert.gap <= 0) throw InvalidInputError("certificate gap must be positive");
  RobustnessConstants out;

  const double smax = linalg::matrix_metrics(psi).spectral_norm;
  const double scale = smax > 0 ? 1.0 / smax : 1.0;
  out.psi_rescaled = std::abs(scale - 1.0) > 1e-9;
  const Matrix psiS = out.psi_rescaled ? Matrix(scale * psi) : psi;

  out.yJ_inf = 1.0 - cert.gap;
  out.rJ = r_of_J(phi, psiS, pattern.J);
  out.C3 = out.rJ * std::sqrt(static_cast<double>(pattern.I.size()));
  const auto mm_psi = linalg::matrix_metrics(psiS);
  const double norm_phi = linalg::matrix_metrics(phi).spectral_norm;
  out.C4 = (1.0 + mm_psi.cond * norm_phi * out.C3) / cert.gap;

  // beta for the rescaled operator: Psi y = Phi'beta scales linearly in Psi.
  const Matrix G = phi * phi.transpose();
  const Vector beta = G.ldlt().solve(phi * (psiS * cert.y));
  out.beta_norm = beta.norm();

  if (C0_in) {
    out.C0 = *C0_in;
    if (out.C0 <= 0) throw InvalidInputError("C0 must be positive");
    const double cb = out.C0 * out.beta_norm;
    out.C1 = 2.0 * out.C3 + cb + (1.0 + cb / 2.0) * (1.0 + cb / 2.0) * out.C4 / out.C0;
  } else {
    const double bn = out.beta_norm;
    const double denom = 4.0 * bn + out.C4 * bn * bn;
    if (denom > 0) {
      out.C0 = std::sqrt(4.0 * out.C4 / denom);
      out.C1 = 2.0 * out.C3 + out.C4 * bn + std::sqrt(out.C4 * out.C4 * bn * bn + 4.0 * out.C4 * bn);
    } else {
      // beta = 0: C1(C0) = 2C3 + C4/C0 decreases in C0; no finite optimum.
      out.C0 = 1.0;
      out.C1 = 2.0 * out.C3 + out.C4;
    }
  }
  out.C2 = 2.0 * out.C3 + 2.0 * out.C4 * out.beta_norm;

  try {
    const RhoTau rt = rho_tau(phi, psiS, pattern.I, pattern.J);
    out.rho = rt.rho;
    out.tau = rt.tau;
  } catch (const UnboundedRatioError&) {
    out.rho = std::numeric_limits<double>::infinity();
    out.tau = std::numeric_limits<double>::infinity();
  }
  return out;
}

RhoTau rho_tau(const Matrix& phi, const Matrix& psi, const IndexSet& I, const IndexSet& J) {
  const Index n = psi.rows();
  const Matrix psiIt = select_columns(psi, I).transpose();  // |I| x n
  const Matrix psiJt = select_columns(psi, J).transpose();  // |J| x n
  const Matrix U = linalg::nullspace_basis(psiJt);
  const Matrix V = U.cols() > 0 ? linalg::nullspace_basis(Matrix(U.transpose()))
                                : Matrix(Matrix::Identity(n, n));

  RhoTau out;
  double inv_smin_phiU = 0.0;
  double norm_psiI_U = 0.0;
  if (U.cols() > 0) {
    const auto sm = linalg::subspace_metrics(phi, U);
    if (sm.sigma_min <= 1e-12 * std::max(1.0, sm.sigma_max))
      throw UnboundedRatioError("kernel condition fails: no finite (rho, tau) exists");
    inv_smin_phiU = 1.0 / sm.sigma_min;
    norm_psiI_U = I.empty() ? 0.0 : linalg::matrix_metrics(Matrix(psiIt * U)).spectral_norm;
    out.tau = norm_psiI_U * inv_smin_phiU;
  }
  if (V.cols() > 0) {
    const double norm_phiV = linalg::matrix_metrics(Matrix(phi * V)).spectral_norm;
    const double norm_psiI_V =
        I.empty() ? 0.0 : linalg::matrix_metrics(Matrix(psiIt * V)).spectral_norm;
    const double smin_psiJ_V = linalg::subspace_metrics(psiJt, V).sigma_min;
    if (smin_psiJ_V <= 0)
      throw UnboundedRatioError("Psi_J' degenerate on the complement of its kernel");
    out.rho = (norm_psiI_U * norm_phiV * inv_smin_phiU + norm_psiI_V) / smin_psiJ_V;
  }
  return out;
}

double bregman_distance(const Matrix& psi, const Vector& y, const Vector& x,
                        const Vector& x_bar) {
  const double l1x = (psi.transpose() * x).lpNorm<1>();
  const double l1xb = (psi.transpose() * x_bar).lpNorm<1>();
  return l1x - l1xb - (psi * y).dot(x - x_bar);
}

Thm2Bounds thm2_bounds(const RobustnessConstants& c, double delta) {
  if (delta < 0) throw InvalidInputError("delta must be nonnegative");
  return Thm2Bounds{c.C1 * delta, c.C2 * delta};
}

double thm3_bound(const Matrix& psi, const Vector& x_star, const IndexSet& I,
                  const certify::DualCertificate& cert, double rho, double tau, double delta) {
  if (cert.gap <= 0) throw InvalidInputError("certificate gap must be positive");
  const Vector z = psi.transpose() * x_star;
  double tail = 0.0;
  std::vector<bool> inI(static_cast<std::size_t>(z.size()), false);
  for (Index i : I) inI[static_cast<std::size_t>(i)] = true;
  for (Index i = 0; i < z.size(); ++i)
    if (!inI[static_cast<std::size_t>(i)]) tail += std::abs(z(i));
  const double beta_norm = cert.beta.norm();
  return 2.0 * (1.0 + rho) / cert.gap * tail +
         (2.0 * (1.0 + rho) * beta_norm / cert.gap + 2.0 * tau) * delta;
}

std::optional<double> relaxed_thm3_bound(double theta1, double rho, double tau, double yJ_inf,
                                         double beta_norm, double tail_l1, double delta) {
  if (theta1 < 0) throw InvalidInputError("theta1 must be nonnegative");
  const double mu1 = rho * theta1 + yJ_inf;
  const double mu2 = tau * theta1 + beta_norm;
  if (mu1 >= 1.0) return std::nullopt;
  return 2.0 * (1.0 + rho) / (1.0 - mu1) * tail_l1 +
         (2.0 * (1.0 + rho) * mu2 / (1.0 - mu1) + 2.0 * tau) * delta;
}

}  // namespace l1cert::constants
