#pragma once

#include "asymgame/analysis.hpp"
#include "asymgame/solver.hpp"
#include "asymgame/tugofwar.hpp"
#include "asymgame/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asymgame::experiments {

struct ExperimentConfig {
  tugofwar::TugOfWarParams game;
  double alpha_fraction = 0.5;  // alpha = alpha_fraction * alpha_max
  int num_inits = 5;
  std::uint64_t seed = 1;
  std::vector<double> eps_sweep = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.0};
  std::string sweep_direction = "ones";  // "ones" | "random" (seeded unit vector)
  std::filesystem::path output_dir = "out";
  double stop_tol = 1e-12;
  double reference_tol = 1e-13;
  int taylor_grid_points = 10000;

  void validate() const;
};

/// Reads a JSON config; absent fields keep their defaults, unknown keys are
/// rejected.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Analytic constants, derived rates, and the configured stepsize. Throws
/// Error{rate_condition_violated} when the uniqueness condition mu > L12*L2
/// fails, so rate-dependent commands refuse to run.
struct RateContext {
  RegularityConstants constants;
  RateReport rates;
  double alpha = 0.0;
  double rho = 0.0;
};
RateContext rate_context(const ExperimentConfig& config);

struct ConstantsOutput {
  RegularityConstants constants;
  RateReport rates;
  EmpiricalEstimates empirical;
  double alpha = 0.0;
  double rho = 0.0;
};
/// Prints the analytic constants (with reference-value comparison for the
/// default benchmark), sampled estimates, and writes constants.json.
ConstantsOutput cmd_constants(const ExperimentConfig& config, std::ostream& out);

struct RunStats {
  int iters_used = 0;
  bool converged = false;
  double dist_u0 = 0.0;
  double dist_u_final = 0.0;
  double dist_v_final = 0.0;
  double max_step_ratio = 0.0;  // max dist_u(k+1)/dist_u(k) above the 1e-10 floor
  std::filesystem::path csv_path;
  std::filesystem::path trace_json_path;  // full per-iteration vectors
};
struct ExactRunOutput {
  RateContext ctx;
  Equilibrium reference;
  std::vector<RunStats> runs;
  double max_step_ratio = 0.0;
  std::filesystem::path summary_path;
};
/// Seeded multi-initialization exact runs with per-iteration envelopes
/// rho^k d0 and L2 rho^k d0; one CSV per run plus a JSON summary.
ExactRunOutput cmd_exact_run(const ExperimentConfig& config, std::ostream& out,
                             const std::optional<std::vector<Vector>>& inits_override =
                                 std::nullopt);

struct InexactRunOutput {
  RateContext ctx;
  Equilibrium reference;
  double eps = 0.0;
  double R_u = 0.0;
  double R_v = 0.0;
  double delta_u_tail = 0.0;
  double delta_v_tail = 0.0;
  /// Taylor oracle only: uniqueness condition of the perturbed game,
  /// mu > L12 * (Taylor slope). Reported, not gated on.
  std::optional<bool> perturbed_unique;
  SolveResult run;
  std::filesystem::path csv_path;
  std::filesystem::path trace_json_path;
  std::filesystem::path summary_path;
};
/// oracle_kind is "taylor" or "additive"; eps is the additive perturbation
/// magnitude (ignored for taylor). Envelope columns are the horizontal lines
/// R_u, R_v.
InexactRunOutput cmd_inexact_run(const ExperimentConfig& config, const std::string& oracle_kind,
                                 double eps, std::ostream& out);

struct SweepRecord {
  double eps = 0.0;
  double delta_u = 0.0;  // tail-limsup of dist_u
  double delta_v = 0.0;
  double R_u = 0.0;
  double R_v = 0.0;
};
struct SweepOutput {
  RateContext ctx;
  std::vector<SweepRecord> records;
  double loglog_slope = 0.0;  // least-squares slope of log delta_u vs log eps
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
};
SweepOutput cmd_eps_sweep(const ExperimentConfig& config, std::ostream& out);

struct CheckGradOutput {
  int points = 0;
  double max_rel_error = 0.0;
};
/// Analytic gradient vs central differences (h = 1e-5) at seeded feasible
/// points.
CheckGradOutput cmd_check_grad(const ExperimentConfig& config, std::ostream& out);

}  // namespace asymgame::experiments
