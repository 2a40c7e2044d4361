#pragma once

#include <optional>

#include "l1cert/certify.hpp"
#include "l1cert/common.hpp"

namespace l1cert::constants {

struct RobustnessConstants {
  double rJ = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
  double C0 = 0.0;  // chosen or optimal
  double C1 = 0.0;
  double C2 = 0.0;
  double beta_norm = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  double yJ_inf = 0.0;
  bool psi_rescaled = false;
};

struct RhoTau {
  double rho = 0.0;
  double tau = 0.0;
};

/// r(J) = sup ||u||_2 / ||Phi u||_2 over Ker(Psi_J') \ {0}; 0 for a trivial
/// kernel. Throws UnboundedRatioError when the kernel condition fails.
double r_of_J(const Matrix& phi, const Matrix& psi, const IndexSet& J);

/// All explicit robustness constants for a valid certificate. When
/// lambda_max(Psi Psi') != 1 the analysis operator is rescaled internally and
/// psi_rescaled is set; the bounds then refer to the rescaled operator.
RobustnessConstants robustness_constants(const Matrix& phi, const Matrix& psi,
                                         const certify::DualCertificate& cert,
                                         const certify::SupportPattern& pattern,
                                         std::optional<double> C0 = std::nullopt);

/// A valid pair for ||Psi_I' x||_2 <= rho ||Psi_J' x||_1 + tau ||Phi x||_2,
/// built from the orthogonal decomposition along Ker(Psi_J').
RhoTau rho_tau(const Matrix& phi, const Matrix& psi, const IndexSet& I, const IndexSet& J);

/// d_y(x, x_bar) = ||Psi'x||_1 - ||Psi'x_bar||_1 - <Psi y, x - x_bar>.
double bregman_distance(const Matrix& psi, const Vector& y, const Vector& x,
                        const Vector& x_bar);

struct Thm2Bounds {
  double bound_1b = 0.0;  // C1 * delta (penalized model)
  double bound_1c = 0.0;  // C2 * delta (constrained model)
};

Thm2Bounds thm2_bounds(const RobustnessConstants& c, double delta);

/// l2 error bound for approximately sparse signals (constrained model).
double thm3_bound(const Matrix& psi, const Vector& x_star, const IndexSet& I,
                  const certify::DualCertificate& cert, double rho, double tau, double delta);

/// Variant with the sign block relaxed to ||y_I - sign||_2 <= theta1.
/// Returns nothing when mu1 = rho*theta1 + ||y_J||_inf >= 1.
std::optional<double> relaxed_thm3_bound(double theta1, double rho, double tau, double yJ_inf,
                                         double beta_norm, double tail_l1, double delta);

}  // namespace l1cert::constants
