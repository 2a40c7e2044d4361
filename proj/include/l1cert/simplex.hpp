#pragma once

#include "l1cert/common.hpp"

namespace l1cert::lp {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// Result of min c'x  s.t.  Ax = b, x >= 0.
struct SimplexResult {
  SimplexStatus status = SimplexStatus::IterationLimit;
  Vector x;        // primal solution (Optimal)
  Vector dual;     // row multipliers y with A'y <= c, b'y = c'x (Optimal)
  Vector farkas;   // q with A'q <= 0, b'q > 0 (Infeasible)
  double value = 0.0;
  int iterations = 0;
};

/// Dense two-phase simplex with Bland's rule. Desk scale only.
SimplexResult simplex_solve(const Vector& c, const Matrix& A, const Vector& b,
                            int max_iter = 20000);

}  // namespace l1cert::lp
