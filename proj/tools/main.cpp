// Experiment CLI: reproduces the benchmark's constants table, the exact and
// inexact convergence runs, and the eps-sweep as plot-ready CSV/JSON files.

#include "asymgame/experiments.hpp"
#include "asymgame/types.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

int exit_code_for(asymgame::errc code) {
  switch (code) {
    case asymgame::errc::dimension_mismatch:
    case asymgame::errc::invalid_argument: return 2;
    case asymgame::errc::no_convergence: return 3;
    case asymgame::errc::rate_condition_violated: return 4;
    case asymgame::errc::oracle_out_of_range: return 5;
    case asymgame::errc::non_finite: return 6;
    case asymgame::errc::unsupported: return 7;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymmetric-information game solver experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "JSON config file (defaults when omitted)");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "override the output directory");

  auto* constants = app.add_subcommand("constants", "analytic constants, rates, and estimates");
  auto* exact = app.add_subcommand("exact-run", "seeded exact runs with decay envelopes");
  auto* inexact_cmd = app.add_subcommand("inexact-run", "run with an approximate oracle");
  std::string oracle = "taylor";
  double eps = 0.0;
  inexact_cmd->add_option("--oracle", oracle, "oracle kind: taylor | additive")
      ->check(CLI::IsMember({"taylor", "additive"}));
  inexact_cmd->add_option("--eps", eps, "perturbation magnitude (additive oracle)");
  auto* sweep = app.add_subcommand("eps-sweep", "steady-state deviation vs oracle error level");
  auto* check_grad = app.add_subcommand("check-grad", "analytic vs finite-difference gradient");

  CLI11_PARSE(app, argc, argv);

  try {
    asymgame::experiments::ExperimentConfig config;
    if (!config_path.empty()) config = asymgame::experiments::load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;

    if (constants->parsed()) {
      asymgame::experiments::cmd_constants(config, std::cout);
    } else if (exact->parsed()) {
      asymgame::experiments::cmd_exact_run(config, std::cout);
    } else if (inexact_cmd->parsed()) {
      asymgame::experiments::cmd_inexact_run(config, oracle, eps, std::cout);
    } else if (sweep->parsed()) {
      asymgame::experiments::cmd_eps_sweep(config, std::cout);
    } else if (check_grad->parsed()) {
      const auto result = asymgame::experiments::cmd_check_grad(config, std::cout);
      if (result.max_rel_error > 1e-6) {
        std::cerr << "error: gradient check failed (max relative error "
                  << result.max_rel_error << " > 1e-6)\n";
        return 1;
      }
    }
  } catch (const asymgame::Error& e) {
    std::cerr << "error [" << asymgame::errc_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
