#pragma once

#include <cstdint>
#include <optional>

#include "l1cert/common.hpp"

namespace l1cert::solvers {

struct SolveResult {
  Vector x;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SolverOptions {
  double solver_tol = 1e-8;
  int max_iter = 200000;
  std::optional<Vector> x0;  // warm start for the first-order solvers
};

struct UniquenessVerdict {
  bool unique = false;
  double optimal_value = 0.0;
  std::optional<std::pair<Vector, Vector>> witness_pair;
  double face_diameter = 0.0;
  bool ambiguous = false;  // face diameter inside the undecidable band
};

struct OracleOptions {
  double oracle_tol = 1e-7;
  double ambiguous_band = 1e-6;
};

struct ProbeResult {
  double max_residual_spread = 0.0;   // spread of Phi x - b across starts
  double max_objective_spread = 0.0;  // spread of ||Psi'x||_1 across starts
};

enum class PenalizedModel { Lasso, Bpdn };

/// min ||Psi'x||_1  s.t.  Phi x = b, solved exactly as an LP.
SolveResult solve_bp(const Matrix& phi, const Matrix& psi, const Vector& b,
                     const SolverOptions& opt = {});

/// min ||Phi x - b||_2^2 + lambda ||Psi'x||_1.
SolveResult solve_lasso(const Matrix& phi, const Matrix& psi, const Vector& b, double lambda,
                        const SolverOptions& opt = {});

/// min ||Psi'x||_1  s.t.  ||Phi x - b||_2 <= delta.
SolveResult solve_bpdn(const Matrix& phi, const Matrix& psi, const Vector& b, double delta,
                       const SolverOptions& opt = {});

/// Probes the optimal face {Phi x = b, ||Psi'x||_1 <= v*} along +-e_i.
UniquenessVerdict uniqueness_oracle(const Matrix& phi, const Matrix& psi, const Vector& b,
                                    double optimal_value, const OracleOptions& opt = {});

/// Multi-start spread of Phi x - b and of the l1 objective (penalized models).
ProbeResult solution_set_probe(const Matrix& phi, const Matrix& psi, const Vector& b,
                               PenalizedModel model, double lambda_or_delta, int n_starts,
                               std::uint64_t seed = 0, const SolverOptions& opt = {});

}  // namespace l1cert::solvers
