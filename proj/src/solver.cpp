#include "asymgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asymgame {

namespace {

SolveResult run_iteration(const GameModel& game, const SolverConfig& config, const Vector& x1_init,
                          const std::optional<Equilibrium>& reference) {
  if (config.alpha <= 0.0) {
    throw Error(errc::invalid_argument, "solver: stepsize alpha must be positive");
  }
  if (config.max_iters < 1) {
    throw Error(errc::invalid_argument, "solver: max_iters must be at least 1");
  }
  if (config.stop_tol < 0.0) {
    throw Error(errc::invalid_argument, "solver: stop_tol must be nonnegative");
  }
  ensure_finite(x1_init, "solver: x1_init");
  if (!game.x1_set.contains(x1_init)) {
    throw Error(errc::invalid_argument,
                "solver: x1_init lies outside X1 (project it onto the feasible box first)");
  }

  SolveResult result;
  if (config.alpha_max && config.alpha >= *config.alpha_max) {
    std::ostringstream w;
    w << "alpha=" << config.alpha << " is not below the certified bound alpha_max="
      << *config.alpha_max << "; the contraction guarantee no longer applies";
    result.warnings.push_back(w.str());
  }
  if (config.record_trace) result.trace.emplace();

  Vector x1 = x1_init;
  for (int k = 0; k < config.max_iters; ++k) {
    const Vector x2 = game.best_response_checked(x1);
    Vector g = game.grad1(x1, x2);
    ensure_same_dim(g, x1, "grad1 output");
    if (!g.allFinite()) {
      std::ostringstream msg;
      msg << "solver: non-finite gradient at iteration " << k;
      throw Error(errc::non_finite, msg.str());
    }
    const Vector x1_next = game.x1_set.project(x1 - config.alpha * g);
    const double step = (x1_next - x1).norm();

    if (result.trace) {
      result.trace->x1.push_back(x1);
      result.trace->x2.push_back(x2);
      result.trace->step_norm.push_back(step);
      if (reference) {
        result.trace->dist_u.push_back((x1 - reference->first).norm());
        result.trace->dist_v.push_back((x2 - reference->second).norm());
      }
    }

    x1 = x1_next;
    result.iters_used = k + 1;
    if (step <= config.stop_tol) {
      result.converged = true;
      break;
    }
  }

  result.x1_final = x1;
  result.x2_final = game.best_response_checked(x1);
  return result;
}

}  // namespace

Vector t_map(const GameModel& game, double alpha, const Vector& x1) {
  if (alpha <= 0.0) {
    throw Error(errc::invalid_argument, "t_map: stepsize alpha must be positive");
  }
  if (!game.x1_set.contains(x1)) {
    throw Error(errc::invalid_argument, "t_map: x1 lies outside X1");
  }
  return game.x1_set.project(x1 - alpha * game.composite_gradient(x1));
}

SolveResult run_exact(const GameModel& game, const SolverConfig& config, const Vector& x1_init,
                      const std::optional<Equilibrium>& reference) {
  return run_iteration(game, config, x1_init, reference);
}

SolveResult run_inexact(const GameModel& game_with_approx_oracle, const SolverConfig& config,
                        const Vector& x1_init, const Equilibrium& reference) {
  return run_iteration(game_with_approx_oracle, config, x1_init, reference);
}

Equilibrium compute_reference_equilibrium(const GameModel& game, double alpha, double tol,
                                          const std::optional<Vector>& init, long max_iters) {
  if (tol < 0.0) {
    throw Error(errc::invalid_argument, "compute_reference_equilibrium: tol must be nonnegative");
  }
  Vector u = init ? game.x1_set.project(*init)
                  : game.x1_set.project(Vector::Zero(game.x1_set.dim()));
  for (long k = 0; k < max_iters; ++k) {
    const Vector next = t_map(game, alpha, u);
    const double step = (next - u).norm();
    u = next;
    if (step <= tol) {
      return {u, game.best_response_checked(u)};
    }
  }
  std::ostringstream msg;
  msg << "compute_reference_equilibrium: no fixed point to tolerance " << tol << " within "
      << max_iters << " iterations";
  throw Error(errc::no_convergence, msg.str());
}

double tail_limsup(std::span<const double> dist, double rho, double stop_tol) {
  if (dist.empty()) {
    throw Error(errc::invalid_argument, "tail_limsup: empty distance sequence");
  }
  std::size_t burn_in = 0;
  if (rho > 0.0 && rho < 1.0 && stop_tol > 0.0 && stop_tol < 1.0) {
    burn_in = 5 * static_cast<std::size_t>(std::ceil(std::log(stop_tol) / std::log(rho)));
  }
  const std::size_t n = dist.size();
  const std::size_t window_start = std::max(burn_in, n - n / 5);
  // Runs that converge before the burn-in ends: use the final iterate.
  const std::size_t start = window_start < n ? window_start : n - 1;
  double worst = 0.0;
  for (std::size_t k = start; k < n; ++k) worst = std::max(worst, dist[k]);
  return worst;
}

}  // namespace asymgame
