#include "asymgame/experiments.hpp"

#include "asymgame/inexact.hpp"
#include "asymgame/trace_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace asymgame::experiments {

using nlohmann::json;

namespace {

constexpr double kDistFloor = 1e-10;  // below this, distances are numerical noise

const tugofwar::TugOfWarParams kBenchmarkDefaults{};

// Documented regression targets for the default benchmark instance.
constexpr double kRefMu = 0.3502;
constexpr double kRefL1 = 0.3725;
constexpr double kRefL12 = 0.0125;
constexpr double kRefL2 = 0.9720;
constexpr double kRefAlphaMax = 4.57;

bool is_default_benchmark(const tugofwar::TugOfWarParams& p) {
  const auto& d = kBenchmarkDefaults;
  return p.N == d.N && p.dt == d.dt && p.mass == d.mass && p.drag == d.drag && p.q_u == d.q_u &&
         p.q_pos == d.q_pos && p.q_vel == d.q_vel && p.r_pull == d.r_pull && p.gamma == d.gamma &&
         p.v_max == d.v_max && p.kappa == d.kappa && p.v_bar == d.v_bar &&
         p.c_react == d.c_react && p.u_min == d.u_min && p.u_max == d.u_max;
}

json constants_json(const RegularityConstants& c) {
  return {{"mu", c.mu}, {"L1", c.L1}, {"L12", c.L12}, {"L2", c.L2}};
}

json rates_json(const RateReport& r) {
  json j{{"m", r.m}, {"L_G", r.L_G}, {"unique", r.unique}};
  if (r.unique) j["alpha_max"] = r.alpha_max;
  return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::invalid_argument, "cannot open for writing: " + path.string());
  }
  out << j.dump(2) << "\n";
}

std::filesystem::path prepare_output_dir(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  return config.output_dir;
}

SolverConfig solver_config(const ExperimentConfig& config, const RateContext& ctx) {
  SolverConfig scfg;
  scfg.alpha = ctx.alpha;
  scfg.stop_tol = config.stop_tol;
  scfg.record_trace = true;
  scfg.alpha_max = ctx.rates.alpha_max;
  return scfg;
}

// Iterations for the exact envelope rho^k d0 to fall below the distance
// floor; sizes the budget of inexact runs so the tail window is genuinely
// post-transient.
int envelope_floor_iters(double rho, double d0) {
  if (!(d0 > kDistFloor) || !(rho > 0.0 && rho < 1.0)) return 1;
  return static_cast<int>(std::ceil(std::log(kDistFloor / d0) / std::log(rho)));
}

double max_step_ratio(const std::vector<double>& dist_u) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < dist_u.size(); ++k) {
    if (dist_u[k] >= kDistFloor && dist_u[k + 1] >= kDistFloor) {
      worst = std::max(worst, dist_u[k + 1] / dist_u[k]);
    }
  }
  return worst;
}

Vector sweep_direction_vector(const ExperimentConfig& config, std::mt19937_64& rng) {
  const int n = config.game.N;
  if (config.sweep_direction == "ones") {
    return Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector d(n);
  do {
    for (int i = 0; i < n; ++i) d[i] = gauss(rng);
  } while (d.norm() < 1e-9);
  return d / d.norm();
}

struct InexactRunPieces {
  SolveResult run;
  double delta_u = 0.0;
  double delta_v = 0.0;
};

InexactRunPieces run_with_oracle(const GameModel& approx_game, const ExperimentConfig& config,
                                 const RateContext& ctx, const Equilibrium& reference,
                                 const Vector& init) {
  SolverConfig scfg = solver_config(config, ctx);
  const double d0 = (init - reference.first).norm();
  scfg.max_iters = 10 * std::max(envelope_floor_iters(ctx.rho, d0), 5);
  InexactRunPieces pieces;
  pieces.run = run_inexact(approx_game, scfg, init, reference);
  pieces.delta_u = tail_limsup(pieces.run.trace->dist_u, ctx.rho, config.stop_tol);
  pieces.delta_v = tail_limsup(pieces.run.trace->dist_v, ctx.rho, config.stop_tol);
  return pieces;
}

}  // namespace

void ExperimentConfig::validate() const {
  game.validate();
  if (!(alpha_fraction > 0.0 && alpha_fraction < 1.0)) {
    throw Error(errc::invalid_argument, "ExperimentConfig: alpha_fraction must lie in (0, 1)");
  }
  if (num_inits < 1) {
    throw Error(errc::invalid_argument, "ExperimentConfig: num_inits must be at least 1");
  }
  if (sweep_direction != "ones" && sweep_direction != "random") {
    throw Error(errc::invalid_argument,
                "ExperimentConfig: sweep_direction must be \"ones\" or \"random\"");
  }
  if (stop_tol < 0.0 || reference_tol < 0.0) {
    throw Error(errc::invalid_argument, "ExperimentConfig: tolerances must be nonnegative");
  }
  if (taylor_grid_points < 3) {
    throw Error(errc::invalid_argument, "ExperimentConfig: taylor_grid_points must be >= 3");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::invalid_argument, "cannot open config file: " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(errc::invalid_argument, "config parse error in " + path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "game") {
        for (const auto& [gkey, gvalue] : value.items()) {
          auto& g = cfg.game;
          if (gkey == "N") g.N = gvalue.get<int>();
          else if (gkey == "dt") g.dt = gvalue.get<double>();
          else if (gkey == "mass") g.mass = gvalue.get<double>();
          else if (gkey == "drag") g.drag = gvalue.get<double>();
          else if (gkey == "q_u") g.q_u = gvalue.get<double>();
          else if (gkey == "q_pos") g.q_pos = gvalue.get<double>();
          else if (gkey == "q_vel") g.q_vel = gvalue.get<double>();
          else if (gkey == "r_pull") g.r_pull = gvalue.get<double>();
          else if (gkey == "gamma") g.gamma = gvalue.get<double>();
          else if (gkey == "v_max") g.v_max = gvalue.get<double>();
          else if (gkey == "kappa") g.kappa = gvalue.get<double>();
          else if (gkey == "v_bar") g.v_bar = gvalue.get<double>();
          else if (gkey == "c_react") g.c_react = gvalue.get<double>();
          else if (gkey == "u_min") g.u_min = gvalue.get<double>();
          else if (gkey == "u_max") g.u_max = gvalue.get<double>();
          else throw Error(errc::invalid_argument, "unknown game config key: " + gkey);
        }
      } else if (key == "alpha_fraction") cfg.alpha_fraction = value.get<double>();
      else if (key == "num_inits") cfg.num_inits = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "eps_sweep") cfg.eps_sweep = value.get<std::vector<double>>();
      else if (key == "sweep_direction") cfg.sweep_direction = value.get<std::string>();
      else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
      else if (key == "stop_tol") cfg.stop_tol = value.get<double>();
      else if (key == "reference_tol") cfg.reference_tol = value.get<double>();
      else if (key == "taylor_grid_points") cfg.taylor_grid_points = value.get<int>();
      else throw Error(errc::invalid_argument, "unknown config key: " + key);
    }
  } catch (const json::exception& e) {
    throw Error(errc::invalid_argument,
                "config type error in " + path.string() + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

RateContext rate_context(const ExperimentConfig& config) {
  config.validate();
  RateContext ctx;
  ctx.constants = tugofwar::constants(config.game);
  ctx.rates = derive_rates(ctx.constants);
  if (!ctx.rates.unique) {
    std::ostringstream msg;
    msg << "uniqueness condition mu > L12*L2 is violated (mu=" << ctx.constants.mu
        << ", L12*L2=" << ctx.constants.L12 * ctx.constants.L2
        << "); rate-dependent commands are unavailable";
    throw Error(errc::rate_condition_violated, msg.str());
  }
  ctx.alpha = config.alpha_fraction * ctx.rates.alpha_max;
  ctx.rho = contraction_modulus(ctx.rates, ctx.alpha);
  return ctx;
}

ConstantsOutput cmd_constants(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  ConstantsOutput result;
  result.constants = tugofwar::constants(config.game);
  result.rates = derive_rates(result.constants);
  result.empirical = empirical_constants(tugofwar::make_game(config.game), 10000,
                                         static_cast<unsigned>(config.seed));

  out << "analytic constants:\n"
      << "  mu  = " << result.constants.mu << "\n"
      << "  L1  = " << result.constants.L1 << "\n"
      << "  L12 = " << result.constants.L12 << "\n"
      << "  L2  = " << result.constants.L2 << "\n"
      << "derived rates:\n"
      << "  m       = " << result.rates.m << "\n"
      << "  L_G     = " << result.rates.L_G << "\n"
      << "  unique  = " << (result.rates.unique ? "true" : "false") << "\n";
  if (is_default_benchmark(config.game)) {
    out << "reference values (default benchmark): mu=" << kRefMu << " L1=" << kRefL1
        << " L12=" << kRefL12 << " L2=" << kRefL2 << " alpha_max=" << kRefAlphaMax << "\n";
  }
  out << "sampled estimates (" << result.empirical.samples << " pairs):\n"
      << "  m~   = " << result.empirical.m << "\n"
      << "  L_G~ = " << result.empirical.L_G << "\n"
      << "  L12~ = " << result.empirical.L12 << "\n"
      << "  L2~  = " << result.empirical.L2 << "\n";

  if (!result.rates.unique) {
    std::ostringstream msg;
    msg << "uniqueness condition mu > L12*L2 is violated (mu=" << result.constants.mu
        << ", L12*L2=" << result.constants.L12 * result.constants.L2 << ")";
    throw Error(errc::rate_condition_violated, msg.str());
  }

  result.alpha = config.alpha_fraction * result.rates.alpha_max;
  result.rho = contraction_modulus(result.rates, result.alpha);
  out << "  alpha_max = " << result.rates.alpha_max << "\n"
      << "  alpha     = " << result.alpha << " (fraction " << config.alpha_fraction << ")\n"
      << "  rho       = " << result.rho << "\n";

  const auto dir = prepare_output_dir(config);
  json j{{"constants", constants_json(result.constants)},
         {"rates", rates_json(result.rates)},
         {"alpha", result.alpha},
         {"rho", result.rho},
         {"empirical",
          {{"m", result.empirical.m},
           {"L_G", result.empirical.L_G},
           {"L12", result.empirical.L12},
           {"L2", result.empirical.L2},
           {"samples", result.empirical.samples}}}};
  write_json(j, dir / "constants.json");
  return result;
}

ExactRunOutput cmd_exact_run(const ExperimentConfig& config, std::ostream& out,
                             const std::optional<std::vector<Vector>>& inits_override) {
  ExactRunOutput result;
  result.ctx = rate_context(config);
  const GameModel game = tugofwar::make_game(config.game);
  result.reference = compute_reference_equilibrium(game, result.ctx.alpha, config.reference_tol);

  std::vector<Vector> inits;
  if (inits_override) {
    inits = *inits_override;
  } else {
    std::mt19937_64 rng(config.seed);
    for (int i = 0; i < config.num_inits; ++i) inits.push_back(game.x1_set.sample_uniform(rng));
  }

  const auto dir = prepare_output_dir(config);
  const SolverConfig scfg = solver_config(config, result.ctx);
  json run_summaries = json::array();

  for (std::size_t i = 0; i < inits.size(); ++i) {
    const SolveResult res = run_exact(game, scfg, inits[i], result.reference);
    const IterateTrace& trace = *res.trace;

    const double d0 = trace.dist_u.empty() ? 0.0 : trace.dist_u.front();
    std::vector<double> env_u(trace.size()), env_v(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
      env_u[k] = std::pow(result.ctx.rho, static_cast<double>(k)) * d0;
      env_v[k] = result.ctx.constants.L2 * env_u[k];
    }

    RunStats stats;
    stats.iters_used = res.iters_used;
    stats.converged = res.converged;
    stats.dist_u0 = d0;
    stats.dist_u_final = (res.x1_final - result.reference.first).norm();
    stats.dist_v_final = (res.x2_final - result.reference.second).norm();
    stats.max_step_ratio = max_step_ratio(trace.dist_u);
    stats.csv_path = dir / ("exact_run_" + std::to_string(i) + ".csv");
    write_trace_csv(trace, env_u, env_v, stats.csv_path);
    stats.trace_json_path = dir / ("exact_run_" + std::to_string(i) + "_trace.json");
    write_json(trace_to_json(trace), stats.trace_json_path);

    result.max_step_ratio = std::max(result.max_step_ratio, stats.max_step_ratio);
    run_summaries.push_back({{"init", vector_to_json(inits[i])},
                             {"iters_used", stats.iters_used},
                             {"converged", stats.converged},
                             {"dist_u0", stats.dist_u0},
                             {"dist_u_final", stats.dist_u_final},
                             {"dist_v_final", stats.dist_v_final},
                             {"max_step_ratio", stats.max_step_ratio},
                             {"trace_csv", stats.csv_path.filename().string()},
                             {"trace_json", stats.trace_json_path.filename().string()}});
    result.runs.push_back(std::move(stats));

    out << "run " << i << ": iters=" << res.iters_used
        << " dist_u0=" << d0
        << " max_step_ratio=" << result.runs.back().max_step_ratio << "\n";
  }

  json j{{"constants", constants_json(result.ctx.constants)},
         {"rates", rates_json(result.ctx.rates)},
         {"alpha", result.ctx.alpha},
         {"rho", result.ctx.rho},
         {"reference_u", vector_to_json(result.reference.first)},
         {"reference_v", vector_to_json(result.reference.second)},
         {"max_step_ratio", result.max_step_ratio},
         {"runs", run_summaries}};
  result.summary_path = dir / "exact_run_summary.json";
  write_json(j, result.summary_path);
  out << "max per-step ratio " << result.max_step_ratio << " (rho " << result.ctx.rho << ")\n";
  return result;
}

InexactRunOutput cmd_inexact_run(const ExperimentConfig& config, const std::string& oracle_kind,
                                 double eps, std::ostream& out) {
  InexactRunOutput result;
  result.ctx = rate_context(config);
  const GameModel game = tugofwar::make_game(config.game);
  result.reference = compute_reference_equilibrium(game, result.ctx.alpha, config.reference_tol);

  std::mt19937_64 rng(config.seed);
  inexact::ApproxOracle oracle;
  if (oracle_kind == "taylor") {
    oracle = inexact::make_taylor_oracle(config.game, config.taylor_grid_points);
    result.perturbed_unique =
        result.ctx.constants.mu >
        result.ctx.constants.L12 * std::abs(inexact::taylor_slope(config.game));
  } else if (oracle_kind == "additive") {
    if (eps < 0.0) {
      throw Error(errc::invalid_argument, "inexact-run: eps must be nonnegative");
    }
    const Vector d = eps * sweep_direction_vector(config, rng);
    oracle = inexact::additive_oracle(game.best_response2, d);
  } else {
    throw Error(errc::invalid_argument,
                "inexact-run: oracle must be \"taylor\" or \"additive\", got \"" + oracle_kind +
                    "\"");
  }
  result.eps = oracle.certified_eps;

  const auto env = robustness_envelopes(result.ctx.rates, result.ctx.constants, result.ctx.alpha,
                                        result.eps);
  result.R_u = env.R_u;
  result.R_v = env.R_v;

  const GameModel approx_game = inexact::with_oracle(game, oracle);
  const Vector init = game.x1_set.sample_uniform(rng);
  const InexactRunPieces pieces =
      run_with_oracle(approx_game, config, result.ctx, result.reference, init);
  result.run = pieces.run;
  result.delta_u_tail = pieces.delta_u;
  result.delta_v_tail = pieces.delta_v;

  const IterateTrace& trace = *result.run.trace;
  const std::vector<double> env_u(trace.size(), result.R_u);
  const std::vector<double> env_v(trace.size(), result.R_v);
  const auto dir = prepare_output_dir(config);
  result.csv_path = dir / ("inexact_" + oracle_kind + ".csv");
  write_trace_csv(trace, env_u, env_v, result.csv_path);
  result.trace_json_path = dir / ("inexact_" + oracle_kind + "_trace.json");
  write_json(trace_to_json(trace), result.trace_json_path);

  // Worst slack in the per-step recursion dist_u(k+1) <= rho dist_u(k) +
  // alpha L12 eps; nonpositive means the bound held at every iteration.
  double recursion_excess = -std::numeric_limits<double>::infinity();
  const double drift = result.ctx.alpha * result.ctx.constants.L12 * result.eps;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    recursion_excess =
        std::max(recursion_excess, trace.dist_u[k + 1] - (result.ctx.rho * trace.dist_u[k] + drift));
  }

  json j{{"constants", constants_json(result.ctx.constants)},
         {"rates", rates_json(result.ctx.rates)},
         {"alpha", result.ctx.alpha},
         {"rho", result.ctx.rho},
         {"oracle", oracle_kind},
         {"eps", result.eps},
         {"R_u", result.R_u},
         {"R_v", result.R_v},
         {"delta_u_tail", result.delta_u_tail},
         {"delta_v_tail", result.delta_v_tail},
         {"iters_used", result.run.iters_used},
         {"converged", result.run.converged},
         {"recursion_excess", recursion_excess},
         {"trace_csv", result.csv_path.filename().string()},
         {"trace_json", result.trace_json_path.filename().string()}};
  if (result.perturbed_unique) j["perturbed_unique"] = *result.perturbed_unique;
  result.summary_path = dir / ("inexact_" + oracle_kind + "_summary.json");
  write_json(j, result.summary_path);

  out << "oracle " << oracle_kind << ": eps=" << result.eps << " R_u=" << result.R_u
      << " R_v=" << result.R_v << "\n"
      << "tail-limsup: delta_u=" << result.delta_u_tail << " delta_v=" << result.delta_v_tail
      << "\n";
  return result;
}

SweepOutput cmd_eps_sweep(const ExperimentConfig& config, std::ostream& out) {
  SweepOutput result;
  result.ctx = rate_context(config);
  if (config.eps_sweep.empty()) {
    throw Error(errc::invalid_argument, "eps-sweep: the sweep grid is empty");
  }
  for (double eps : config.eps_sweep) {
    if (!(eps > 0.0)) {
      throw Error(errc::invalid_argument,
                  "eps-sweep: every sweep level must be positive (the exact run covers eps=0)");
    }
  }

  const GameModel game = tugofwar::make_game(config.game);
  const Equilibrium reference =
      compute_reference_equilibrium(game, result.ctx.alpha, config.reference_tol);

  std::mt19937_64 rng(config.seed);
  const Vector direction = sweep_direction_vector(config, rng);

  for (double eps : config.eps_sweep) {
    const inexact::ApproxOracle oracle =
        inexact::additive_oracle(game.best_response2, eps * direction);
    const GameModel approx_game = inexact::with_oracle(game, oracle);
    const Vector init = game.x1_set.sample_uniform(rng);
    const InexactRunPieces pieces =
        run_with_oracle(approx_game, config, result.ctx, reference, init);
    const auto env = robustness_envelopes(result.ctx.rates, result.ctx.constants, result.ctx.alpha,
                                          oracle.certified_eps);
    result.records.push_back(
        {oracle.certified_eps, pieces.delta_u, pieces.delta_v, env.R_u, env.R_v});
    out << "eps=" << eps << ": delta_u=" << pieces.delta_u << " (R_u=" << env.R_u
        << ") delta_v=" << pieces.delta_v << " (R_v=" << env.R_v << ")\n";
  }

  // Least-squares slope of log delta_u against log eps.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& rec : result.records) {
    if (!(rec.delta_u > 0.0)) continue;
    const double x = std::log(rec.eps);
    const double y = std::log(rec.delta_u);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    throw Error(errc::no_convergence,
                "eps-sweep: fewer than two positive deviations; cannot fit a scaling slope");
  }
  result.loglog_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);

  const auto dir = prepare_output_dir(config);
  result.csv_path = dir / "eps_sweep.csv";
  {
    std::ofstream csv(result.csv_path, std::ios::binary);
    if (!csv) {
      throw Error(errc::invalid_argument, "cannot open for writing: " + result.csv_path.string());
    }
    csv << "eps,delta_u,delta_v,R_u,R_v\n";
    for (const auto& rec : result.records) {
      csv << format_number(rec.eps) << ',' << format_number(rec.delta_u) << ','
          << format_number(rec.delta_v) << ',' << format_number(rec.R_u) << ','
          << format_number(rec.R_v) << "\n";
    }
  }

  json records = json::array();
  for (const auto& rec : result.records) {
    records.push_back({{"eps", rec.eps},
                       {"delta_u", rec.delta_u},
                       {"delta_v", rec.delta_v},
                       {"R_u", rec.R_u},
                       {"R_v", rec.R_v}});
  }
  json j{{"constants", constants_json(result.ctx.constants)},
         {"rates", rates_json(result.ctx.rates)},
         {"alpha", result.ctx.alpha},
         {"rho", result.ctx.rho},
         {"direction", config.sweep_direction},
         {"loglog_slope", result.loglog_slope},
         {"records", records}};
  result.summary_path = dir / "eps_sweep_summary.json";
  write_json(j, result.summary_path);

  out << "log-log slope of delta_u vs eps: " << result.loglog_slope << "\n";
  return result;
}

CheckGradOutput cmd_check_grad(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  constexpr int kPoints = 10;
  constexpr double kStep = 1e-5;

  const auto dyn = tugofwar::build_dynamics(config.game);
  const GameModel game = tugofwar::make_game(config.game);
  std::mt19937_64 rng(config.seed);

  CheckGradOutput result;
  result.points = kPoints;
  for (int i = 0; i < kPoints; ++i) {
    const Vector u = game.x1_set.sample_uniform(rng);
    const Vector v = game.x2_set.sample_uniform(rng);
    const Vector analytic = tugofwar::grad_j1_u(config.game, dyn, u, v);
    const Vector numeric = finite_difference_gradient(
        [&](const Vector& x) { return tugofwar::cost_j1(config.game, dyn, x, v); }, u, kStep);
    const double rel = (numeric - analytic).norm() / std::max(analytic.norm(), 1e-12);
    result.max_rel_error = std::max(result.max_rel_error, rel);
    out << "point " << i << ": relative error " << rel << "\n";
  }
  out << "max relative error: " << result.max_rel_error << "\n";
  return result;
}

}  // namespace asymgame::experiments
