#include "l1cert/simplex.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace l1cert::lp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;

struct Tableau {
  Matrix E;          // working constraint matrix (columns: original + artificial)
  Vector b;          // working rhs, nonnegative
  std::vector<Index> basis;
  int iterations = 0;
};

enum class IterOutcome { Optimal, Unbounded, IterationLimit };

// Revised simplex iterations with Bland's rule. `allowed(j)` guards entry.
template <typename Allowed>
IterOutcome run_simplex(Tableau& t, const Vector& cost, Allowed allowed, int max_iter,
                        Vector& xB, Vector& y) {
  const Index m = t.E.rows();
  const Index ncols = t.E.cols();
  while (true) {
    Matrix B(m, m);
    for (Index i = 0; i < m; ++i) B.col(i) = t.E.col(t.basis[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Matrix> lu(B);
    xB = lu.solve(t.b);
    Vector cB(m);
    for (Index i = 0; i < m; ++i) cB(i) = cost(t.basis[static_cast<std::size_t>(i)]);
    y = lu.transpose().solve(cB);

    // Bland: entering column is the smallest index with negative reduced cost.
    Index enter = -1;
    for (Index j = 0; j < ncols; ++j) {
      if (!allowed(j)) continue;
      if (std::find(t.basis.begin(), t.basis.end(), j) != t.basis.end()) continue;
      const double red = cost(j) - t.E.col(j).dot(y);
      if (red < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return IterOutcome::Optimal;

    Vector w = lu.solve(t.E.col(enter));
    // Bland leaving rule: min ratio, ties broken by smallest basis index.
    Index leave = -1;
    double best = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (w(i) > kPivotTol) {
        const double ratio = std::max(xB(i), 0.0) / w(i);
        if (leave < 0 || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 &&
             t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) return IterOutcome::Unbounded;
    t.basis[static_cast<std::size_t>(leave)] = enter;
    if (++t.iterations >= max_iter) return IterOutcome::IterationLimit;
  }
}

}  // namespace

SimplexResult simplex_solve(const Vector& c, const Matrix& A, const Vector& b, int max_iter) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (c.size() != n || b.size() != m) throw InvalidInputError("simplex: dimension mismatch");
  if (!A.allFinite() || !b.allFinite() || !c.allFinite())
    throw InvalidInputError("simplex: non-finite input");

  SimplexResult out;
  if (m == 0) {
    // No constraints: x = 0 is optimal iff c >= 0.
    out.x = Vector::Zero(n);
    out.dual = Vector();
    out.status = (n == 0 || c.minCoeff() >= -kCostTol) ? SimplexStatus::Optimal
                                                       : SimplexStatus::Unbounded;
    return out;
  }

  Tableau t;
  Vector flip = Vector::Ones(m);
  t.E.resize(m, n + m);
  t.E.leftCols(n) = A;
  t.E.rightCols(m) = Matrix::Identity(m, m);
  t.b = b;
  for (Index i = 0; i < m; ++i) {
    if (t.b(i) < 0) {
      t.b(i) = -t.b(i);
      t.E.row(i).head(n) = -t.E.row(i).head(n);
      flip(i) = -1;
    }
  }
  std::vector<Index> row_ids(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) row_ids[static_cast<std::size_t>(i)] = i;
  t.basis.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) t.basis[static_cast<std::size_t>(i)] = n + i;

  // Phase 1.
  Vector c1 = Vector::Zero(n + m);
  c1.tail(m).setOnes();
  Vector xB, y;
  IterOutcome o = run_simplex(t, c1, [](Index) { return true; }, max_iter, xB, y);
  out.iterations = t.iterations;
  if (o == IterOutcome::IterationLimit) {
    out.status = SimplexStatus::IterationLimit;
    return out;
  }
  double phase1 = 0.0;
  for (Index i = 0; i < t.E.rows(); ++i)
    if (t.basis[static_cast<std::size_t>(i)] >= n) phase1 += std::max(xB(i), 0.0);
  const double feas_scale = 1.0 + t.b.cwiseAbs().maxCoeff();
  if (phase1 > 1e-8 * feas_scale) {
    out.status = SimplexStatus::Infeasible;
    out.farkas = Vector::Zero(m);
    for (Index i = 0; i < m; ++i) out.farkas(i) = flip(i) * y(i);
    return out;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  for (Index r = 0; r < t.E.rows();) {
    const Index bv = t.basis[static_cast<std::size_t>(r)];
    if (bv < n) {
      ++r;
      continue;
    }
    Matrix B(t.E.rows(), t.E.rows());
    for (Index i = 0; i < t.E.rows(); ++i)
      B.col(i) = t.E.col(t.basis[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Matrix> lu(B);
    Index pivot_col = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::find(t.basis.begin(), t.basis.end(), j) != t.basis.end()) continue;
      Vector u = lu.solve(t.E.col(j));
      if (std::abs(u(r)) > 1e-7) {
        pivot_col = j;
        break;
      }
    }
    if (pivot_col >= 0) {
      t.basis[static_cast<std::size_t>(r)] = pivot_col;
      ++r;
    } else {
      // Redundant constraint row: remove it together with its artificial.
      const Index rows = t.E.rows();
      Matrix E2(rows - 1, t.E.cols());
      Vector b2(rows - 1);
      Index k = 0;
      for (Index i = 0; i < rows; ++i) {
        if (i == r) continue;
        E2.row(k) = t.E.row(i);
        b2(k) = t.b(i);
        ++k;
      }
      t.E = E2;
      t.b = b2;
      t.basis.erase(t.basis.begin() + r);
      row_ids.erase(row_ids.begin() + r);
    }
  }

  // Phase 2: artificials may not re-enter.
  o = run_simplex(t, [&] {
        Vector c2 = Vector::Zero(n + m);
        c2.head(n) = c;
        return c2;
      }(),
      [n](Index j) { return j < n; }, max_iter, xB, y);
  out.iterations = t.iterations;
  if (o == IterOutcome::IterationLimit) {
    out.status = SimplexStatus::IterationLimit;
    return out;
  }
  if (o == IterOutcome::Unbounded) {
    out.status = SimplexStatus::Unbounded;
    return out;
  }

  out.status = SimplexStatus::Optimal;
  out.x = Vector::Zero(n);
  for (Index i = 0; i < t.E.rows(); ++i) {
    const Index bv = t.basis[static_cast<std::size_t>(i)];
    if (bv < n) out.x(bv) = std::max(xB(i), 0.0);
  }
  out.value = c.dot(out.x);
  out.dual = Vector::Zero(m);
  for (Index i = 0; i < t.E.rows(); ++i) {
    const Index orig = row_ids[static_cast<std::size_t>(i)];
    out.dual(orig) = flip(orig) * y(i);
  }
  return out;
}

}  // namespace l1cert::lp
