// Command-line front end: verification, constants, solvers, condition
// comparison, noise sweeps, and random instance generation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "l1cert/certify.hpp"
#include "l1cert/common.hpp"
#include "l1cert/compare.hpp"
#include "l1cert/constants.hpp"
#include "l1cert/generate.hpp"
#include "l1cert/io.hpp"
#include "l1cert/solvers.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace l1cert;

json to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json to_json(const IndexSet& s) {
  json arr = json::array();
  for (Index i : s) arr.push_back(i);
  return arr;
}

const char* verdict_name(certify::Verdict v) {
  switch (v) {
    case certify::Verdict::Unique: return "Unique";
    case certify::Verdict::NotUnique: return "NotUnique";
    default: return "Marginal";
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("L1CERT_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

certify::ProblemInstance load_or_exit(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    std::cerr << "error: instance file not found: " << path << "\n";
    std::exit(4);
  }
  return io::load_instance(path);
}

Vector resolve_x(const certify::ProblemInstance& inst, const std::string& x_from) {
  if (x_from == "solve" || !inst.x_star) {
    auto res = solvers::solve_bp(inst.phi, inst.psi, inst.b);
    return res.x;
  }
  return *inst.x_star;
}

json report_to_json(const certify::ConditionReport& rep) {
  json out;
  out["verdict"] = verdict_name(rep.verdict);
  out["kernel_ok"] = rep.kernel_ok;
  out["lp_value"] = rep.lp_value;
  out["support"] = {{"I", to_json(rep.pattern.I)},
                    {"J", to_json(rep.pattern.J)},
                    {"K", to_json(rep.pattern.K)},
                    {"sign_I", to_json(rep.pattern.sign_I)}};
  if (rep.certificate) {
    out["certificate"] = {{"y", to_json(rep.certificate->y)},
                          {"beta", to_json(rep.certificate->beta)},
                          {"gap", rep.certificate->gap},
                          {"range_residual", rep.certificate->range_residual}};
  }
  return out;
}

int cmd_check(const std::string& path, const std::string& x_from, const certify::Tolerances& tol) {
  auto inst = load_or_exit(path);
  Vector x = resolve_x(inst, x_from);
  auto rep = certify::verify_condition1(inst, x, tol);
  std::cout << report_to_json(rep).dump(2) << "\n";
  switch (rep.verdict) {
    case certify::Verdict::Unique: return 0;
    case certify::Verdict::NotUnique: return 1;
    default: return 2;
  }
}

int cmd_constants(const std::string& path, std::optional<double> C0) {
  auto inst = load_or_exit(path);
  Vector x = resolve_x(inst, "file");
  auto rep = certify::verify_condition1(inst, x);
  if (rep.verdict != certify::Verdict::Unique || !rep.certificate) {
    std::cerr << "error: the uniqueness hypothesis fails for this instance "
                 "(verdict " << verdict_name(rep.verdict)
              << "); the robustness constants are not defined\n";
    return 3;
  }
  auto c = constants::robustness_constants(inst.phi, inst.psi, *rep.certificate, rep.pattern, C0);
  json out;
  out["rJ"] = c.rJ;
  out["C0"] = c.C0;
  out["C1"] = c.C1;
  out["C2"] = c.C2;
  out["C3"] = c.C3;
  out["C4"] = c.C4;
  out["beta_norm"] = c.beta_norm;
  out["rho"] = c.rho;
  out["tau"] = c.tau;
  out["yJ_inf"] = c.yJ_inf;
  out["psi_rescaled"] = c.psi_rescaled;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_solve(const std::string& path, const std::string& model, std::optional<double> lambda,
              std::optional<double> delta) {
  auto inst = load_or_exit(path);
  solvers::SolveResult res;
  if (model == "bp") {
    res = solvers::solve_bp(inst.phi, inst.psi, inst.b);
  } else if (model == "lasso") {
    double lam = lambda ? *lambda : inst.lambda.value_or(0.0);
    if (lam <= 0) {
      std::cerr << "error: lasso needs a positive lambda (flag or instance field)\n";
      return 3;
    }
    res = solvers::solve_lasso(inst.phi, inst.psi, inst.b, lam);
  } else {
    double del = delta ? *delta : inst.delta.value_or(-1.0);
    if (del < 0) {
      std::cerr << "error: bpdn needs a nonnegative delta (flag or instance field)\n";
      return 3;
    }
    res = solvers::solve_bpdn(inst.phi, inst.psi, inst.b, del);
  }
  json out;
  out["model"] = model;
  out["x"] = to_json(res.x);
  out["objective"] = res.objective;
  out["kkt_residual"] = res.kkt_residual;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_compare(const std::string& path) {
  auto inst = load_or_exit(path);
  Vector x = resolve_x(inst, "file");
  auto rep = compare::implication_tests(inst, x);
  json out;
  out["cond1"] = {{"verdict", verdict_name(rep.cond1.verdict)}, {"lp_value", rep.cond1.lp_value}};
  out["cond2"] = {{"holds", rep.cond2.holds}, {"value", rep.cond2.value}};
  if (rep.cond3) out["cond3"] = {{"holds", rep.cond3->holds}, {"t", rep.cond3->t_used}};
  out["cond4"] = {{"holds", rep.cond4.holds}, {"ic", rep.cond4.ic}};
  out["cond5"] = {{"holds", rep.cond5.holds},
                  {"rc", rep.cond5.rc},
                  {"c_J", rep.cond5.c_J},
                  {"exact", rep.cond5.exact}};
  out["violations"] = rep.violations;
  std::cout << out.dump(2) << "\n";
  return rep.violations.empty() ? 0 : 1;
}

struct SweepRow {
  std::uint64_t seed;
  std::string model;
  double delta, lambda, lhs, bound;
  bool satisfied;
  int iters;
};

int cmd_sweep(const std::string& path, int draws, std::vector<double> grid, std::uint64_t seed,
              const std::string& out_path, std::optional<double> C0) {
  auto inst = load_or_exit(path);
  if (!inst.x_star) {
    std::cerr << "error: sweep needs x_star in the instance\n";
    return 3;
  }
  const Vector& xs = *inst.x_star;
  auto rep = certify::verify_condition1(inst, xs);
  if (rep.verdict != certify::Verdict::Unique || !rep.certificate) {
    std::cerr << "error: sweep needs a Unique instance (verdict "
              << verdict_name(rep.verdict) << ")\n";
    return 3;
  }
  auto consts = constants::robustness_constants(inst.phi, inst.psi, *rep.certificate,
                                                rep.pattern, C0);
  const double solver_tol = solvers::SolverOptions{}.solver_tol;
  const Vector psix = inst.psi.transpose() * xs;
  const double tail_l1 = select_entries(psix, rep.pattern.J).cwiseAbs().sum();
  const bool approx_sparse = tail_l1 > 1e-14 * (1.0 + psix.cwiseAbs().maxCoeff());

  std::sort(grid.begin(), grid.end());
  std::vector<SweepRow> rows;
  for (double delta : grid) {
    for (int d = 0; d < draws; ++d) {
      const std::uint64_t row_seed = seed + static_cast<std::uint64_t>(d);
      std::mt19937_64 rng(row_seed ^ 0x9e3779b97f4a7c15ull);
      Vector w = delta > 0 ? generate::sphere_noise(inst.b.size(), delta, rng)
                           : Vector::Zero(inst.b.size());
      const Vector b = inst.phi * xs + w;
      const double lambda = delta > 0 ? consts.C0 * delta : 1e-9;

      auto push = [&](const std::string& model, double lam, double lhs, double bound, int it) {
        bool ok = lhs <= bound * (1.0 + 1e-6) + 10.0 * solver_tol;
        rows.push_back({row_seed, model, delta, lam, lhs, bound, ok, it});
      };

      auto bounds = constants::thm2_bounds(consts, delta);
      try {
        auto r1b = solvers::solve_lasso(inst.phi, inst.psi, b, lambda);
        double lhs = (inst.psi.transpose() * (r1b.x - xs)).cwiseAbs().sum();
        push("lasso", lambda, lhs, bounds.bound_1b, r1b.iterations);
      } catch (const std::exception& e) {
        std::cerr << "lasso failed (seed " << row_seed << ", delta " << delta << "): "
                  << e.what() << "\n";
      }
      try {
        auto r1c = solvers::solve_bpdn(inst.phi, inst.psi, b, delta);
        double lhs = (inst.psi.transpose() * (r1c.x - xs)).cwiseAbs().sum();
        push("bpdn", 0.0, lhs, bounds.bound_1c, r1c.iterations);
        if (approx_sparse) {
          double bound = constants::thm3_bound(inst.psi, xs, rep.pattern.I, *rep.certificate,
                                               consts.rho, consts.tau, delta);
          push("bpdn_l2", 0.0, (inst.psi.transpose() * (r1c.x - xs)).norm(), bound,
               r1c.iterations);
        }
      } catch (const std::exception& e) {
        std::cerr << "bpdn failed (seed " << row_seed << ", delta " << delta << "): "
                  << e.what() << "\n";
      }
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.seed, a.delta) < std::tie(b.seed, b.delta);
  });
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 3;
    }
    os = &file;
  }
  (*os) << "seed,model,delta,lambda,lhs,bound,satisfied,iters\n";
  os->precision(17);
  for (const auto& r : rows)
    (*os) << r.seed << ',' << r.model << ',' << r.delta << ',' << r.lambda << ',' << r.lhs
          << ',' << r.bound << ',' << (r.satisfied ? "true" : "false") << ',' << r.iters << "\n";
  const bool all_ok = std::all_of(rows.begin(), rows.end(),
                                  [](const SweepRow& r) { return r.satisfied; });
  return all_ok ? 0 : 1;
}

int cmd_generate(const generate::GenerateOptions& opt, const std::string& out_path) {
  auto inst = generate::random_instance(opt);
  if (out_path.empty())
    std::cout << io::instance_to_json(inst) << "\n";
  else
    io::save_instance(inst, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-certificate uniqueness checks and robustness bounds for "
               "l1-analysis minimization"};
  app.require_subcommand(1);

  std::string path, x_from = "file", model = "bp", out_path, psi_kind = "identity";
  certify::Tolerances tol;
  std::optional<double> C0, lambda, delta;
  int draws = 50;
  std::vector<double> grid = {0.01, 0.1};
  std::uint64_t seed = default_seed();
  generate::GenerateOptions gen;
  gen.seed = seed;

  auto* check = app.add_subcommand("check", "Verify solution uniqueness");
  check->add_option("instance", path)->required();
  check->add_option("--x-from", x_from)->check(CLI::IsMember({"file", "solve"}));
  check->add_option("--strict-tol", tol.strict_tol);
  check->add_option("--supp-tol", tol.supp_tol);
  check->add_option("--feas-tol", tol.feas_tol);

  auto* consts = app.add_subcommand("constants", "Robustness constants for a Unique instance");
  consts->add_option("instance", path)->required();
  double c0_val = 0.0;
  auto* c0_opt = consts->add_option("--C0", c0_val);

  auto* solve = app.add_subcommand("solve", "Solve one of the three models");
  solve->add_option("instance", path)->required();
  solve->add_option("--model", model)->check(CLI::IsMember({"bp", "lasso", "bpdn"}));
  double lam_val = 0.0, del_val = 0.0;
  auto* lam_opt = solve->add_option("--lambda", lam_val);
  auto* del_opt = solve->add_option("--delta", del_val);

  auto* comp = app.add_subcommand("compare", "Evaluate all uniqueness conditions");
  comp->add_option("instance", path)->required();

  auto* sweep = app.add_subcommand("sweep", "Noise sweep against the error bounds");
  sweep->add_option("instance", path)->required();
  sweep->add_option("--noise-draws", draws);
  sweep->add_option("--delta-grid", grid)->delimiter(',');
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", out_path);
  double sweep_c0 = 0.0;
  auto* sweep_c0_opt = sweep->add_option("--C0", sweep_c0);

  auto* genc = app.add_subcommand("generate", "Generate a random instance");
  genc->add_option("--m", gen.m);
  genc->add_option("--n", gen.n);
  genc->add_option("--l", gen.l);
  genc->add_option("--sparsity", gen.sparsity);
  genc->add_option("--psi", psi_kind)->check(CLI::IsMember({"identity", "tight-frame", "random"}));
  genc->add_option("--seed", gen.seed);
  genc->add_flag("--rounded-phi", gen.rounded_phi);
  genc->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(path, x_from, tol);
    if (*consts) {
      if (*c0_opt) C0 = c0_val;
      return cmd_constants(path, C0);
    }
    if (*solve) {
      if (*lam_opt) lambda = lam_val;
      if (*del_opt) delta = del_val;
      return cmd_solve(path, model, lambda, delta);
    }
    if (*comp) return cmd_compare(path);
    if (*sweep) {
      if (*sweep_c0_opt) C0 = sweep_c0;
      return cmd_sweep(path, draws, grid, seed, out_path, C0);
    }
    if (*genc) {
      if (psi_kind == "tight-frame") gen.psi = generate::PsiKind::TightFrame;
      else if (psi_kind == "random") gen.psi = generate::PsiKind::Random;
      return cmd_generate(gen, out_path);
    }
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: Infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
