#pragma once

#include <optional>

#include "l1cert/common.hpp"
#include "l1cert/lp.hpp"

namespace l1cert::certify {

struct ProblemInstance {
  Matrix phi;  // m x n
  Matrix psi;  // n x l
  Vector b;    // m
  std::optional<Vector> x_star;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::string name;
};

struct SupportPattern {
  IndexSet I;     // analysis support
  IndexSet J;     // strict off-support (certificate entries bounded below 1)
  IndexSet K;     // remaining entries (bounded by 1)
  Vector sign_I;  // +-1 over I
};

struct DualCertificate {
  Vector y;               // l-vector
  Vector beta;            // m-vector with Psi y = Phi' beta
  double gap = 0.0;       // 1 - ||y_J||_inf
  double range_residual = 0.0;  // ||Q' Psi y||_inf
  bool sign_match = true;
};

enum class Verdict { Unique, NotUnique, Marginal };

struct Tolerances {
  double strict_tol = 1e-9;
  double supp_tol = 1e-8;
  double feas_tol = 1e-9;
  double rank_tol = 0.0;  // 0 = per-matrix default
};

struct KernelCheck {
  bool ok = false;
  std::optional<Vector> witness;  // unit vector in Ker(Psi_J') /\ Ker(Phi)
};

struct ConditionReport {
  bool kernel_ok = false;
  std::optional<DualCertificate> certificate;
  lp::LpStatus lp_status = lp::LpStatus::NotConverged;
  double lp_value = 0.0;
  Verdict verdict = Verdict::NotUnique;
  SupportPattern pattern;
  Tolerances tol;
};

struct CertificateSearch {
  std::optional<DualCertificate> certificate;
  lp::LpStatus lp_status = lp::LpStatus::NotConverged;
  double lp_value = 0.0;
};

struct AssumptionsCheck {
  bool a1 = false;  // Phi full row rank
  bool a2 = false;  // lambda_max(Psi Psi') = 1
  bool a3 = false;  // Psi full row rank
  double psi_scale = 1.0;  // 1/sqrt(lambda_max(Psi Psi'))
};

/// I = entries of Psi'x above supp_tol * ||Psi'x||_inf, J = I^c, K empty.
SupportPattern extract_support(const Matrix& psi, const Vector& x, double supp_tol = 1e-8);

/// Part (1): Ker(Psi_J') /\ Ker(Phi) = {0}, decided as full column rank of
/// Psi_J' Q for Q a kernel basis of Phi.
KernelCheck check_kernel_condition(const Matrix& phi, const Matrix& psi, const IndexSet& J,
                                   double rank_tol = 0.0);

/// Part (2): certificate via the infinity-norm program on the kernel of Phi.
/// K nonempty routes to the box variant.
CertificateSearch find_certificate(const Matrix& phi, const Matrix& psi,
                                   const SupportPattern& pattern, const Tolerances& tol = {});

ConditionReport verify_condition1(const ProblemInstance& instance, const Vector& x_bar,
                                  const Tolerances& tol = {});

ConditionReport verify_condition1_prime(const ProblemInstance& instance, const Vector& x_bar,
                                        const IndexSet& J, const Tolerances& tol = {});

AssumptionsCheck check_assumptions(const Matrix& phi, const Matrix& psi);

}  // namespace l1cert::certify
