#pragma once

#include "asymgame/game_model.hpp"
#include "asymgame/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace asymgame {

struct SolverConfig {
  double alpha = 1.0;      // stepsize, > 0
  int max_iters = 200000;  // hard iteration budget
  double stop_tol = 1e-12; // threshold on the step norm ||x1^{k+1} - x1^k||
  bool record_trace = true;
  /// When supplied the solver warns (does not refuse) if alpha >= alpha_max;
  /// the stepsize bound is sufficient, not necessary.
  std::optional<double> alpha_max;
};

/// Per-iteration record. Row k holds the iterate pair before step k is
/// applied, the norm of that step, and (when a reference equilibrium was
/// supplied) the distances to it.
struct IterateTrace {
  std::vector<Vector> x1;
  std::vector<Vector> x2;
  std::vector<double> step_norm;
  std::vector<double> dist_u;  // ||x1^k - x1*||, empty without a reference
  std::vector<double> dist_v;  // ||x2^k - x2*||, empty without a reference

  std::size_t size() const noexcept { return step_norm.size(); }
  bool has_reference() const noexcept { return !dist_u.empty(); }
};

struct SolveResult {
  Vector x1_final;
  Vector x2_final;
  int iters_used = 0;
  bool converged = false;
  std::optional<IterateTrace> trace;
  std::vector<std::string> warnings;
};

using Equilibrium = std::pair<Vector, Vector>;

/// One full update T(x1) = Proj[x1 - alpha * grad1(x1, BR2(x1))]. Fixed
/// points are exactly the Nash equilibria when the contraction conditions
/// hold.
Vector t_map(const GameModel& game, double alpha, const Vector& x1);

/// Projected best-response/gradient iteration with the game's own oracle.
/// Stops when the step norm drops to stop_tol or the budget runs out.
SolveResult run_exact(const GameModel& game, const SolverConfig& config, const Vector& x1_init,
                      const std::optional<Equilibrium>& reference = std::nullopt);

/// Same loop driven by an approximate best-response oracle; the reference is
/// the equilibrium of the unperturbed game, so the recorded distances measure
/// the robustness neighborhood.
SolveResult run_inexact(const GameModel& game_with_approx_oracle, const SolverConfig& config,
                        const Vector& x1_init, const Equilibrium& reference);

/// Iterates the exact map until ||T(u) - u|| <= tol and returns (u*, BR2(u*)).
/// Throws Error{no_convergence} if the hard cap is exhausted first.
Equilibrium compute_reference_equilibrium(const GameModel& game, double alpha, double tol = 1e-13,
                                          const std::optional<Vector>& init = std::nullopt,
                                          long max_iters = 1000000);

/// Empirical limsup estimate: max of dist over the final fifth of the run
/// after a burn-in of 5*ceil(log(stop_tol)/log(rho)) iterations. Runs that
/// converge before the burn-in ends report the final recorded distance.
double tail_limsup(std::span<const double> dist, double rho, double stop_tol);

}  // namespace asymgame
