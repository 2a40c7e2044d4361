#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l1cert/certify.hpp"
#include "l1cert/common.hpp"

namespace l1cert::compare {

struct Cond2Result {
  bool holds = false;
  double value = 0.0;   // ||(Q'Psi_{I^c})^+ Q'Psi_I sign||_inf
  bool rank_ok = false;
};

struct Cond3Result {
  bool holds = false;
  double t_used = 0.0;
  IndexSet I_t;
};

struct Cond4Result {
  bool holds = false;
  double ic = 0.0;
  Matrix omega;  // |J| x |I|
};

struct Cond5Result {
  bool holds = false;
  double rc = 0.0;
  double c_J = 0.0;
  bool exact = true;  // false when the sign-vertex budget forced sampling
};

struct ComparisonReport {
  Cond2Result cond2;
  std::optional<Cond3Result> cond3;  // needs a certificate y; absent otherwise
  Cond4Result cond4;
  Cond5Result cond5;
  certify::ConditionReport cond1;
  std::vector<std::string> violations;  // failed cross-condition implications
};

Cond2Result eval_condition2(const Matrix& phi, const Matrix& psi,
                            const certify::SupportPattern& pattern, double strict_tol = 1e-9);

Cond4Result eval_condition4_IC(const Matrix& phi, const Matrix& psi,
                               const certify::SupportPattern& pattern, double strict_tol = 1e-9);

Cond5Result eval_condition5_RC(const Matrix& phi, const Matrix& psi, const IndexSet& I,
                               const IndexSet& J, double strict_tol = 1e-9,
                               int vertex_budget_bits = 20);

/// lambda = rho_factor * noise_norm * c_J / (2 (1 - RC)); only when RC < 1.
std::optional<double> suggested_lambda(const Cond5Result& c5, double noise_norm,
                                       double rho_factor);

Cond3Result eval_condition3(const Matrix& phi, const Matrix& psi, const Vector& y, double t);

/// Runs every evaluator plus the main verification and cross-checks the
/// claimed implications; failures land in `violations`.
ComparisonReport implication_tests(const certify::ProblemInstance& instance,
                                   const Vector& x_bar, const certify::Tolerances& tol = {});

}  // namespace l1cert::compare
