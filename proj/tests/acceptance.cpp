// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero when any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "l1cert/certify.hpp"
#include "l1cert/compare.hpp"
#include "l1cert/constants.hpp"
#include "l1cert/generate.hpp"
#include "l1cert/io.hpp"
#include "l1cert/lp.hpp"
#include "l1cert/simplex.hpp"
#include "l1cert/solvers.hpp"

using namespace l1cert;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail = "") {
  std::printf("%s: criterion %d (%s)%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.empty() ? "" : " ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

certify::ProblemInstance gen(std::uint64_t seed, Index m, Index n, Index sparsity,
                             generate::PsiKind kind = generate::PsiKind::Identity,
                             bool rounded = false, Index l = 0) {
  generate::GenerateOptions opt;
  opt.m = m;
  opt.n = n;
  opt.l = l ? l : n;
  opt.sparsity = sparsity;
  opt.psi = kind;
  opt.seed = seed;
  opt.rounded_phi = rounded;
  return generate::random_instance(opt);
}

// ---------------------------------------------------------------------------
// 1: reproduction of the bundled 3x3 instance values.
void criterion1() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  try {
    auto inst = io::load_instance(std::string(FIXTURE_DIR) + "/analysis_3d.json");
    auto p = certify::extract_support(inst.psi, *inst.x_star);
    auto c2 = compare::eval_condition2(inst.phi, inst.psi, p);
    auto c4 = compare::eval_condition4_IC(inst.phi, inst.psi, p);
    auto rep = certify::verify_condition1(inst, *inst.x_star);
    ok &= std::abs(c2.value - 105.0 / 101.0) < 1e-9;
    ok &= std::abs(c4.ic - 105.0 / 101.0) < 1e-9;
    ok &= rep.verdict == certify::Verdict::Unique;
    ok &= std::abs(rep.lp_value - 21.0 / 22.0) < 1e-9;
    ok &= seconds_since(t0) < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "c2=%.12f ic=%.12f lp=%.12f t=%.2fs", c2.value, c4.ic,
                  rep.lp_value, seconds_since(t0));
    detail = buf;
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(1, ok, "bundled example values", detail);
}

// ---------------------------------------------------------------------------
// 2: certificate verdict vs brute-force face probe on random instances.
void criterion2() {
  auto t0 = Clock::now();
  int tested = 0, matched = 0, skipped = 0;
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 1000;
  while (tested < 220 && seconds_since(t0) < 100.0) {
    ++seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_n(3, 10), pick_kind(0, 2);
    const Index n = pick_n(rng);
    const Index m = std::min<Index>(8, 1 + static_cast<Index>(rng() % n));
    const Index s = 1 + static_cast<Index>(rng() % n);
    const int kind = pick_kind(rng);
    certify::ProblemInstance inst;
    try {
      inst = gen(seed, m, n, std::min(s, n),
                 kind == 2 ? generate::PsiKind::TightFrame : generate::PsiKind::Identity,
                 kind == 1, n + (kind == 2 ? 2 : 0));
    } catch (const std::exception&) {
      continue;
    }
    try {
      auto bp = solvers::solve_bp(inst.phi, inst.psi, inst.b);
      auto rep = certify::verify_condition1(inst, bp.x);
      auto oracle = solvers::uniqueness_oracle(inst.phi, inst.psi, inst.b, bp.objective);
      if (rep.verdict == certify::Verdict::Marginal || std::abs(rep.lp_value - 1.0) <= 1e-6 ||
          oracle.ambiguous) {
        ++skipped;
        continue;
      }
      ++tested;
      const bool claims_unique = rep.verdict == certify::Verdict::Unique;
      if (claims_unique == oracle.unique)
        ++matched;
      else if (ok) {
        ok = false;
        detail = "first mismatch at seed " + std::to_string(seed);
      }
    } catch (const std::exception&) {
      ++skipped;
    }
  }
  ok = ok && tested >= 200 && matched == tested && seconds_since(t0) < 120.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "matched %d/%d (skipped %d) t=%.1fs %s", matched, tested,
                skipped, seconds_since(t0), detail.c_str());
  report(2, ok, "verdict equals brute-force face probe", buf);
}

// ---------------------------------------------------------------------------
// Shared sweep for criteria 3 and 4.
struct SweepStats {
  int draws = 0;
  int viol_l1_1b = 0, viol_l1_1c = 0;
  int viol_breg_1b = 0, viol_res_1b = 0, viol_breg_1c = 0;
  int instances = 0;
  std::string note;
};

SweepStats run_sweep(int want_instances, int draws_per_delta) {
  SweepStats st;
  const std::vector<double> deltas = {1e-3, 1e-2, 1e-1};
  std::uint64_t seed = 5000;
  while (st.instances < want_instances && seed < 5600) {
    ++seed;
    certify::ProblemInstance inst;
    try {
      inst = gen(seed, 4, 7, 2,
                 seed % 3 ? generate::PsiKind::Identity : generate::PsiKind::TightFrame,
                 false, 9);
    } catch (const std::exception&) {
      continue;
    }
    const Vector xs = *inst.x_star;
    auto rep = certify::verify_condition1(inst, xs);
    if (rep.verdict != certify::Verdict::Unique || !rep.certificate) continue;
    constants::RobustnessConstants c;
    try {
      c = constants::robustness_constants(inst.phi, inst.psi, *rep.certificate, rep.pattern);
    } catch (const std::exception&) {
      continue;
    }
    if (c.psi_rescaled) continue;  // generated operators are already normalized
    ++st.instances;
    const Vector& y = rep.certificate->y;
    const double bn = c.beta_norm;
    std::mt19937_64 noise_rng(seed * 77 + 1);
    for (double delta : deltas) {
      const double lambda = c.C0 * delta;
      auto bounds = constants::thm2_bounds(c, delta);
      for (int d = 0; d < draws_per_delta; ++d) {
        Vector w = generate::sphere_noise(inst.b.size(), delta, noise_rng);
        Vector b = inst.phi * xs + w;
        try {
          auto r1b = solvers::solve_lasso(inst.phi, inst.psi, b, lambda);
          auto r1c = solvers::solve_bpdn(inst.phi, inst.psi, b, delta);
          ++st.draws;
          const double slack = 1e-6;
          double l1_1b = (inst.psi.transpose() * (r1b.x - xs)).cwiseAbs().sum();
          double l1_1c = (inst.psi.transpose() * (r1c.x - xs)).cwiseAbs().sum();
          if (l1_1b > bounds.bound_1b * (1 + slack)) ++st.viol_l1_1b;
          if (l1_1c > bounds.bound_1c * (1 + slack)) ++st.viol_l1_1c;

          double d1b = constants::bregman_distance(inst.psi, y, r1b.x, xs);
          double d1c = constants::bregman_distance(inst.psi, y, r1c.x, xs);
          double breg_cap_1b = (delta + lambda * bn / 2) * (delta + lambda * bn / 2) / lambda;
          if (d1b > breg_cap_1b * (1 + slack)) ++st.viol_breg_1b;
          if ((inst.phi * r1b.x - b).norm() > (delta + lambda * bn) * (1 + slack))
            ++st.viol_res_1b;
          if (d1c > 2 * delta * bn * (1 + slack) + 1e-12) ++st.viol_breg_1c;
        } catch (const std::exception& e) {
          st.note = e.what();
          ++st.viol_l1_1b;  // a failed solve counts against the criterion
        }
      }
    }
  }
  return st;
}

// ---------------------------------------------------------------------------
// 5: approximately sparse recovery bound plus the (rho, tau) inequality.
void criterion5() {
  bool ok = true;
  std::string detail;
  int checked = 0, mc_viol = 0, bound_viol = 0;
  std::uint64_t seed = 8000;
  while (checked < 6 && seed < 8200) {
    ++seed;
    certify::ProblemInstance inst;
    try {
      inst = gen(seed, 4, 7, 2);
    } catch (const std::exception&) {
      continue;
    }
    const Vector xs = *inst.x_star;
    auto rep = certify::verify_condition1(inst, xs);
    if (rep.verdict != certify::Verdict::Unique || !rep.certificate) continue;
    constants::RhoTau rt;
    try {
      rt = constants::rho_tau(inst.phi, inst.psi, rep.pattern.I, rep.pattern.J);
    } catch (const std::exception&) {
      continue;
    }
    ++checked;

    // Monte-Carlo validation of the sparse-recovery inequality.
    std::mt19937_64 rng(seed * 31);
    std::normal_distribution<double> g;
    Matrix psi_I = select_columns(inst.psi, rep.pattern.I);
    Matrix psi_J = select_columns(inst.psi, rep.pattern.J);
    for (int k = 0; k < 10000; ++k) {
      Vector x(inst.phi.cols());
      for (Index i = 0; i < x.size(); ++i) x(i) = g(rng);
      x.normalize();
      double lhs = (psi_I.transpose() * x).norm();
      double rhs = rt.rho * (psi_J.transpose() * x).cwiseAbs().sum() +
                   rt.tau * (inst.phi * x).norm();
      if (lhs > rhs + 1e-9) ++mc_viol;
    }

    // Tails of two sizes on the off-support, fixed noise level.
    for (double tail_mass : {1e-3, 1e-2}) {
      Vector x_tail = xs;
      const auto& J = rep.pattern.J;
      for (std::size_t j = 0; j < J.size(); ++j)
        x_tail(J[j]) += (j % 2 ? -1.0 : 1.0) * tail_mass / static_cast<double>(J.size());
      const double delta = 1e-2;
      std::mt19937_64 wrng(seed * 13 + 7);
      Vector w = generate::sphere_noise(inst.b.size(), delta, wrng);
      Vector b = inst.phi * x_tail + w;
      try {
        auto r = solvers::solve_bpdn(inst.phi, inst.psi, b, delta);
        double lhs = (inst.psi.transpose() * (r.x - x_tail)).norm();
        double bound = constants::thm3_bound(inst.psi, x_tail, rep.pattern.I,
                                             *rep.certificate, rt.rho, rt.tau, delta);
        if (lhs > bound * (1 + 1e-6)) ++bound_viol;
      } catch (const std::exception& e) {
        ++bound_viol;
        detail = e.what();
      }
    }
  }
  ok = checked >= 5 && mc_viol == 0 && bound_viol == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "instances=%d mc_violations=%d bound_violations=%d %s",
                checked, mc_viol, bound_viol, detail.c_str());
  report(5, ok, "approximately sparse error bound", buf);
}

// ---------------------------------------------------------------------------
// 6: duality-gap certification and small-problem vertex oracle.
double vertex_oracle_inf_norm(const Matrix& A, const Vector& u1) {
  // Standard form of min ||u||_inf s.t. Au = u1: variables [t, u+, u-, s].
  const Index m = A.rows(), n = A.cols();
  Matrix S = Matrix::Zero(m + n, 1 + 3 * n);
  Vector rhs(m + n), cost = Vector::Zero(1 + 3 * n);
  cost(0) = 1.0;
  S.block(0, 1, m, n) = A;
  S.block(0, 1 + n, m, n) = -A;
  rhs.head(m) = u1;
  for (Index i = 0; i < n; ++i) {
    S(m + i, 0) = -1.0;
    S(m + i, 1 + i) = 1.0;
    S(m + i, 1 + n + i) = 1.0;
    S(m + i, 1 + 2 * n + i) = 1.0;
    rhs(m + i) = 0.0;
  }
  const Index rows = m + n, cols = 1 + 3 * n;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(rows));
  std::function<void(Index, Index)> rec = [&](Index start, Index depth) {
    if (depth == rows) {
      Matrix B(rows, rows);
      for (Index j = 0; j < rows; ++j) B.col(j) = S.col(pick[static_cast<std::size_t>(j)]);
      Eigen::FullPivLU<Matrix> lu(B);
      if (!lu.isInvertible()) return;
      Vector xb = lu.solve(rhs);
      if ((xb.array() < -1e-9).any()) return;
      double val = 0.0;
      for (Index j = 0; j < rows; ++j) val += cost(pick[static_cast<std::size_t>(j)]) * xb(j);
      best = std::min(best, val);
      return;
    }
    for (Index i = start; i < cols; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

void criterion6() {
  bool ok = true;
  int gap_checked = 0, oracle_checked = 0;
  double worst_gap = 0.0, worst_oracle = 0.0;
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = 1 + static_cast<Index>(rng() % 3);
    const Index n = m + 1 + static_cast<Index>(rng() % 3);
    Matrix A(m, n);
    Vector x0(n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) A(i, j) = g(rng);
    for (Index j = 0; j < n; ++j) x0(j) = g(rng);
    Vector u1 = A * x0;
    auto s = lp::solve_inf_norm_eq(A, u1);
    if (s.status != lp::LpStatus::Optimal) {
      ok = false;
      continue;
    }
    ++gap_checked;
    worst_gap = std::max(worst_gap, s.duality_gap / (1.0 + std::abs(s.value)));
    if (s.duality_gap > 1e-8 * (1.0 + std::abs(s.value))) ok = false;
    auto d = lp::dual_value(A, u1);
    if (std::abs(d.value - s.value) > 1e-8 * (1.0 + std::abs(s.value))) ok = false;
    if (n <= 4) {
      double oracle = vertex_oracle_inf_norm(A, u1);
      ++oracle_checked;
      worst_oracle = std::max(worst_oracle, std::abs(oracle - s.value));
      if (std::abs(oracle - s.value) > 1e-6) ok = false;
    }
  }
  ok = ok && gap_checked >= 50 && oracle_checked >= 10;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gaps=%d (worst %.2e) oracle=%d (worst %.2e)", gap_checked,
                worst_gap, oracle_checked, worst_oracle);
  report(6, ok, "duality-gap certification", buf);
}

// ---------------------------------------------------------------------------
// 7: cross-condition implications on every tested instance.
void criterion7() {
  int tested = 0, violations = 0;
  std::string first;
  std::uint64_t seed = 9000;
  while (tested < 100 && seed < 9400) {
    ++seed;
    certify::ProblemInstance inst;
    try {
      inst = gen(seed, 3, 6, 1 + seed % 3,
                 seed % 2 ? generate::PsiKind::Identity : generate::PsiKind::TightFrame,
                 false, 8);
    } catch (const std::exception&) {
      continue;
    }
    try {
      auto rep = compare::implication_tests(inst, *inst.x_star);
      ++tested;
      if (!rep.violations.empty()) {
        violations += static_cast<int>(rep.violations.size());
        if (first.empty()) first = rep.violations.front() + " (seed " + std::to_string(seed) + ")";
      }
    } catch (const std::exception&) {
      continue;
    }
  }
  // The bundled instance exercises the strict-strength gap explicitly.
  auto inst = io::load_instance(std::string(FIXTURE_DIR) + "/analysis_3d.json");
  auto rep = compare::implication_tests(inst, *inst.x_star);
  violations += static_cast<int>(rep.violations.size());
  ++tested;
  bool ok = tested >= 100 && violations == 0;
  char buf[240];
  std::snprintf(buf, sizeof buf, "instances=%d violations=%d %s", tested, violations,
                first.c_str());
  report(7, ok, "condition implication suite", buf);
}

// ---------------------------------------------------------------------------
// 8: identity analysis operator reduces the ratio to a submatrix quantity.
void criterion8() {
  std::mt19937_64 rng(321);
  std::normal_distribution<double> g;
  int checked = 0;
  double worst = 0.0;
  bool ok = true;
  while (checked < 100) {
    const Index n = 4 + static_cast<Index>(rng() % 5);
    const Index m = 2 + static_cast<Index>(rng() % (n - 2));
    const Index keep = 1 + static_cast<Index>(rng() % m);
    Matrix phi(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) phi(i, j) = g(rng);
    IndexSet I;
    for (Index i = 0; i < keep; ++i) I.push_back(i);
    IndexSet J = complement(I, n);
    Matrix sub = select_columns(phi, I);
    Eigen::JacobiSVD<Matrix> svd(sub);
    double expected = 1.0 / svd.singularValues().minCoeff();
    double got;
    try {
      got = constants::r_of_J(phi, Matrix::Identity(n, n), J);
    } catch (const std::exception&) {
      continue;
    }
    ++checked;
    worst = std::max(worst, std::abs(got - expected) / expected);
    if (std::abs(got - expected) > 1e-10 * std::max(1.0, expected)) ok = false;
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "pairs=%d worst_rel=%.2e", checked, worst);
  report(8, ok, "identity-operator ratio identity", buf);
}

// ---------------------------------------------------------------------------
// 9: residual and objective invariance across solver restarts.
void criterion9() {
  const double cap = 10.0 * solvers::SolverOptions{}.solver_tol;
  int tested = 0;
  double worst = 0.0;
  bool ok = true;
  std::string first;
  std::uint64_t seed = 11000;
  while (tested < 50 && seed < 11200) {
    ++seed;
    certify::ProblemInstance inst;
    try {
      // Every fourth instance uses the snapped measurement alphabet, which
      // breeds ties and non-unique solutions on purpose.
      inst = gen(seed, 3, 6, 2, generate::PsiKind::Identity, seed % 4 == 0);
    } catch (const std::exception&) {
      continue;
    }
    ++tested;
    const double lambda = 0.3, delta = 0.05;
    try {
      auto pl = solvers::solution_set_probe(inst.phi, inst.psi, inst.b,
                                            solvers::PenalizedModel::Lasso, lambda, 5, seed);
      auto pc = solvers::solution_set_probe(inst.phi, inst.psi, inst.b,
                                            solvers::PenalizedModel::Bpdn, delta, 5, seed);
      double w = std::max({pl.max_residual_spread, pl.max_objective_spread,
                           pc.max_residual_spread, pc.max_objective_spread});
      worst = std::max(worst, w);
      if (w > cap && first.empty()) first = "seed " + std::to_string(seed);
    } catch (const std::exception& e) {
      if (first.empty()) first = e.what();
      worst = 1.0;
    }
  }
  ok = tested >= 50 && worst <= cap;
  char buf[160];
  std::snprintf(buf, sizeof buf, "instances=%d worst_spread=%.2e cap=%.1e %s", tested, worst,
                cap, first.c_str());
  report(9, ok, "restart invariance of residual and objective", buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();

  auto t0 = Clock::now();
  auto st = run_sweep(20, 17);  // 17 draws x 3 deltas = 51 per instance
  {
    bool ok = st.instances >= 20 && st.viol_l1_1b == 0 && st.viol_l1_1c == 0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "instances=%d draws=%d viol_1b=%d viol_1c=%d t=%.1fs %s", st.instances,
                  st.draws, st.viol_l1_1b, st.viol_l1_1c, seconds_since(t0), st.note.c_str());
    report(3, ok, "noise-level error bounds", buf);
    bool ok4 = st.instances >= 20 && st.viol_breg_1b == 0 && st.viol_res_1b == 0 &&
               st.viol_breg_1c == 0;
    char buf4[200];
    std::snprintf(buf4, sizeof buf4, "viol_breg_1b=%d viol_res_1b=%d viol_breg_1c=%d",
                  st.viol_breg_1b, st.viol_res_1b, st.viol_breg_1c);
    report(4, ok4, "distance and residual caps along the sweep", buf4);
  }

  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();

  return failures == 0 ? 0 : 1;
}
