#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "l1cert/lp.hpp"
#include "l1cert/simplex.hpp"

using namespace l1cert;

namespace {

// Exhaustive basic-solution oracle for min c'x s.t. Ax = b, x >= 0 with few
// columns. Returns the best objective over feasible bases, or +inf.
double basis_enumeration_value(const Vector& c, const Matrix& A, const Vector& b) {
  const Index m = A.rows(), n = A.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(m));
  auto rec = [&](auto&& self, Index start, Index depth) -> void {
    if (depth == m) {
      Matrix B(m, m);
      for (Index j = 0; j < m; ++j) B.col(j) = A.col(pick[static_cast<std::size_t>(j)]);
      Eigen::FullPivLU<Matrix> lu(B);
      if (!lu.isInvertible()) return;
      Vector xb = lu.solve(b);
      if ((xb.array() < -1e-9).any()) return;
      double val = 0.0;
      for (Index j = 0; j < m; ++j) val += c(pick[static_cast<std::size_t>(j)]) * xb(j);
      best = std::min(best, val);
      return;
    }
    for (Index i = start; i < n; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("simplex solves a textbook problem") {
  // min -x1 - 2 x2  s.t.  x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6, x >= 0.
  Matrix A(2, 4);
  A << 1, 1, 1, 0, 1, 3, 0, 1;
  Vector b(2), c(4);
  b << 4, 6;
  c << -1, -2, 0, 0;
  auto r = lp::simplex_solve(c, A, b);
  REQUIRE(r.status == lp::SimplexStatus::Optimal);
  CHECK(r.value == doctest::Approx(-5.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
  // Strong duality and dual feasibility.
  CHECK(b.dot(r.dual) == doctest::Approx(r.value));
  CHECK(((A.transpose() * r.dual - c).array() <= 1e-9).all());
}

TEST_CASE("simplex detects infeasibility with a certificate") {
  Matrix A(2, 2);
  A << 1, 1, 1, 1;
  Vector b(2), c(2);
  b << 1, 2;
  c << 1, 1;
  auto r = lp::simplex_solve(c, A, b);
  REQUIRE(r.status == lp::SimplexStatus::Infeasible);
  CHECK(((A.transpose() * r.farkas).array() <= 1e-9).all());
  CHECK(b.dot(r.farkas) > 1e-9);
}

TEST_CASE("simplex detects unboundedness") {
  // min -x1 s.t. x1 - x2 = 0: push both to infinity.
  Matrix A(1, 2);
  A << 1, -1;
  Vector b(1), c(2);
  b << 0;
  c << -1, 0;
  auto r = lp::simplex_solve(c, A, b);
  CHECK(r.status == lp::SimplexStatus::Unbounded);
}

TEST_CASE("simplex matches basis enumeration on random problems") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Matrix A(2, 4);
    Vector c(4), x0(4);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 4; ++j) A(i, j) = g(rng);
    for (Index j = 0; j < 4; ++j) {
      c(j) = g(rng);
      x0(j) = std::abs(g(rng));  // feasible by construction
    }
    Vector b = A * x0;
    double oracle = basis_enumeration_value(c, A, b);
    auto r = lp::simplex_solve(c, A, b);
    if (!std::isfinite(oracle)) continue;  // unbounded below
    if (r.status != lp::SimplexStatus::Optimal) {
      CHECK(r.status == lp::SimplexStatus::Unbounded);
      continue;
    }
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-7));
    ++solved;
  }
  CHECK(solved > 10);
}

TEST_CASE("inf-norm program attains the known minimum") {
  // min ||u||_inf s.t. u1 + u2 = 2: symmetric optimum u = (1, 1).
  Matrix A(1, 2);
  A << 1, 1;
  Vector u1(1);
  u1 << 2;
  auto s = lp::solve_inf_norm_eq(A, u1);
  REQUIRE(s.status == lp::LpStatus::Optimal);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK((A * s.u - u1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(s.duality_gap < 1e-8);
}

TEST_CASE("inf-norm program certifies its value by duality") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(2, 5);
    Vector x0(5);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 5; ++j) A(i, j) = g(rng);
    for (Index j = 0; j < 5; ++j) x0(j) = g(rng);
    Vector u1 = A * x0;
    auto s = lp::solve_inf_norm_eq(A, u1);
    REQUIRE(s.status == lp::LpStatus::Optimal);
    CHECK(s.value == doctest::Approx(s.u.cwiseAbs().maxCoeff()).epsilon(1e-9));
    CHECK(s.duality_gap <= 1e-8 * (1.0 + std::abs(s.value)));
    // The dual value functional agrees.
    auto d = lp::dual_value(A, u1);
    CHECK(d.status == lp::LpStatus::Optimal);
    CHECK(d.value == doctest::Approx(s.value).epsilon(1e-8));
  }
}

TEST_CASE("inf-norm program reports infeasibility") {
  Matrix A(2, 1);
  A << 1, 1;
  Vector u1(2);
  u1 << 1, 2;
  auto s = lp::solve_inf_norm_eq(A, u1);
  CHECK(s.status == lp::LpStatus::Infeasible);
  REQUIRE(s.infeasibility_certificate.size() == 2);
  const Vector& q = s.infeasibility_certificate;
  CHECK((A.transpose() * q).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + q.cwiseAbs().maxCoeff()));
  CHECK(q.dot(u1) > 1e-9);
}

TEST_CASE("box variant reduces to the equality variant when nothing is boxed") {
  Matrix A(1, 3);
  A << 1, 2, -1;
  Vector u1(1);
  u1 << 3;
  auto eq = lp::solve_inf_norm_eq(A, u1);
  auto box = lp::solve_inf_norm_box(A, u1, {0, 1, 2}, {});
  REQUIRE(eq.status == lp::LpStatus::Optimal);
  REQUIRE(box.status == lp::LpStatus::Optimal);
  CHECK(box.value == doctest::Approx(eq.value).epsilon(1e-9));
}

TEST_CASE("box variant uses the boxed coordinate freely up to one") {
  // u_free + u_box = 1.5 with |u_box| <= 1: optimum u_box = 1, value 0.5.
  Matrix A(1, 2);
  A << 1, 1;
  Vector u1(1);
  u1 << 1.5;
  auto s = lp::solve_inf_norm_box(A, u1, {0}, {1});
  REQUIRE(s.status == lp::LpStatus::Optimal);
  CHECK(s.value == doctest::Approx(0.5));
  CHECK(std::abs(s.u(1)) <= 1.0 + 1e-9);
}

TEST_CASE("chebyshev affine fit") {
  // min_a || (1, -1, 0) - a (1, 1, 1) ||_inf = 1 at a = 0.
  Matrix N(3, 1);
  N << 1, 1, 1;
  Vector t(3);
  t << 1, -1, 0;
  CHECK(lp::chebyshev_affine_min(N, t) == doctest::Approx(1.0));
  CHECK(lp::chebyshev_affine_min(Matrix(3, 0), t) == doctest::Approx(1.0));
  Vector z = Vector::Zero(0);
  CHECK(lp::chebyshev_affine_min(Matrix(0, 2), z) == doctest::Approx(0.0));
}
