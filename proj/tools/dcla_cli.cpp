// dcla: command-line front end.
//
//   dcla run --config cfg.json --out dir [--seed N]
//   dcla ablate --config cfg.json --lambda 1e-3,1e-2 --gamma 1e-3,5e-3 --out dir
//   dcla prox-check [--trials N] [--seed N]
//   dcla stepsize --q 1 --mu 0.1 --lambda 0.01 --lf 1.8 [--lr2 L]

#include "dcla/harness.hpp"
#include "dcla/oracle.hpp"
#include "dcla/potentials.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

int cmd_run(const std::string& config, const std::string& out, const std::optional<std::uint64_t>& seed,
            bool quiet) {
  dcla::ExperimentConfig cfg = dcla::parse_config(config);
  if (seed) cfg.seed = *seed;
  const auto report =
      dcla::run_experiment(cfg, out.empty() ? cfg.output_dir : out, {dcla::threads_from_env(), quiet});
  std::cout << std::setprecision(6);
  if (report.Z > 0.0) std::cout << "Z = " << report.Z << '\n';
  for (const auto& s : report.samplers) {
    std::cout << dcla::to_string(s.kind) << ':';
    for (const auto& [bins, kl] : s.kl) std::cout << "  KL[" << bins << "]=" << kl;
    std::cout << "  (" << s.wall_time_s << " s)\n";
  }
  std::cout << "wrote " << report.files.size() << " files\n";
  return 0;
}

int cmd_ablate(const std::string& config, const std::string& lambdas, const std::string& gammas,
               const std::string& out, const std::optional<std::uint64_t>& seed, bool quiet) {
  dcla::ExperimentConfig cfg = dcla::parse_config(config);
  if (seed) cfg.seed = *seed;
  const auto rows = dcla::run_ablation(cfg, dcla::parse_real_list(lambdas),
                                       dcla::parse_real_list(gammas),
                                       out.empty() ? cfg.output_dir : out,
                                       {dcla::threads_from_env(), quiet});
  std::cout << "lambda,gamma,binned_kl,n_nonfinite_chains\n" << std::setprecision(6);
  for (const auto& r : rows) {
    std::cout << r.lambda << ',' << r.gamma << ',' << r.binned_kl << ',' << r.n_nonfinite_chains
              << '\n';
  }
  return 0;
}

int cmd_prox_check(int trials, std::uint64_t seed) {
  constexpr double tol = 1e-4;
  bool ok = true;
  std::cout << std::setprecision(3);
  for (const auto& r : dcla::oracle::run_prox_checks(trials, seed)) {
    const bool pass = r.max_deviation <= tol;
    ok = ok && pass;
    std::cout << std::left << std::setw(32) << r.name << " trials=" << r.trials
              << " max_dev=" << std::scientific << r.max_deviation << std::defaultfloat
              << (pass ? "  ok" : "  FAIL") << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_stepsize(int q, double mu, double lam, double lf, const std::optional<double>& lr2) {
  std::cout << std::setprecision(17);
  std::cout << "dcla  " << dcla::max_stepsize(q, mu, lam, lf, dcla::DclaBound{}) << '\n';
  if (lr2) std::cout << "dclas " << dcla::max_stepsize(q, mu, lam, lf, dcla::DclasBound{*lr2}) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DC-LA and baseline Langevin samplers"};
  app.require_subcommand(1);

  std::string config, out, lambdas, gammas;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run every configured sampler and write metrics");
  run->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (default: config output_dir)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--quiet", quiet, "suppress warnings and progress");

  auto* ablate = app.add_subcommand("ablate", "DC-LA binned KL over a (lambda, gamma) grid");
  ablate->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
  ablate->add_option("--lambda", lambdas, "comma-separated lambda values")->required();
  ablate->add_option("--gamma", gammas, "comma-separated gamma values")->required();
  ablate->add_option("--out", out, "output directory (default: config output_dir)");
  ablate->add_option("--seed", seed, "override the config seed");
  ablate->add_flag("--quiet", quiet, "suppress warnings and progress");

  int trials = 200;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("prox-check", "compare prox routines to brute-force argmins");
  check->add_option("--trials", trials, "random cases per operator")->check(CLI::PositiveNumber);
  check->add_option("--seed", check_seed, "seed for the random cases");

  int q = 1;
  double mu = 0.0, lam = 0.0, lf = 0.0;
  std::optional<double> lr2;
  auto* step = app.add_subcommand("stepsize", "largest step size allowed by the convergence bounds");
  step->add_option("--q", q, "Wasserstein order")->required();
  step->add_option("--mu", mu, "dissipativity modulus")->required();
  step->add_option("--lambda", lam, "Moreau smoothing parameter")->required();
  step->add_option("--lf", lf, "Lipschitz constant of grad f")->required();
  step->add_option("--lr2", lr2, "Lipschitz constant of grad r2 (adds the DC-LA-S bound)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config, out, seed, quiet);
    if (ablate->parsed()) return cmd_ablate(config, lambdas, gammas, out, seed, quiet);
    if (check->parsed()) return cmd_prox_check(trials, check_seed);
    if (step->parsed()) return cmd_stepsize(q, mu, lam, lf, lr2);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
