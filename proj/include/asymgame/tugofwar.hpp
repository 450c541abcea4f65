#pragma once

#include "asymgame/analysis.hpp"
#include "asymgame/game_model.hpp"
#include "asymgame/types.hpp"

#include <string>
#include <vector>

namespace asymgame::tugofwar {

/// One-dimensional cart with viscous drag pushed by two opposing force
/// sequences over an N-step horizon. Player 1 picks u to maximize forward
/// progress under a quadratic penalty; Player 2 reacts with a saturating
/// elementwise tanh map. Defaults are the benchmark instance.
struct TugOfWarParams {
  int N = 5;            // horizon length (steps)
  double dt = 0.2;      // sampling time (s)
  double mass = 1.0;    // cart mass (kg); not the monotonicity margin m
  double drag = 0.6;    // viscous coefficient (N*s/m)
  double q_u = 0.35;    // control penalty
  double q_pos = 0.32;  // position penalty
  double q_vel = 0.01;  // velocity penalty
  double r_pull = 5.4;  // linear pull reward weight
  double gamma = 0.01;  // bilinear coupling weight
  double v_max = 1.8;   // reaction saturation (N)
  double kappa = 0.6;   // reaction-map gain
  double v_bar = 0.9;   // reaction-map offset
  double c_react = 0.9; // reaction-map input scaling
  double u_min = -3.0;  // control bounds (N)
  double u_max = 3.0;

  /// Throws Error{invalid_argument} on invariant violations.
  void validate() const;

  /// Non-fatal sanity flags (e.g. dt*drag/mass >= 2 sign-flips the velocity
  /// damping in the discretization).
  std::vector<std::string> warnings() const;
};

/// Affine horizon prediction Z(u, v) = S0 + Su u + Sv v stacking
/// z_1, ..., z_N with z_t = (position, velocity). Block (t, j) of Su is
/// Ad^(t-1-j) Bu for j < t and zero otherwise; Bv = -Bu so Su + Sv = 0.
struct StackedDynamics {
  Matrix Ad;  // 2x2 discrete-time state matrix
  Vector Bu;  // input map for u
  Vector Bv;  // input map for v (= -Bu)
  Vector S0;  // 2N stacked free response from z0 = (0, 0)
  Matrix Su;  // 2N x N
  Matrix Sv;  // 2N x N
  Vector Cx;  // selects position components: Cx' Z = sum_t p_t
};

StackedDynamics build_dynamics(const TugOfWarParams& params);

/// Q = blkdiag(q_pos, q_vel, ..., q_pos, q_vel), 2N x 2N.
Matrix state_weight_matrix(const TugOfWarParams& params);

/// J1(u, v) = (q_u/2)||u||^2 + (1/2) Z'QZ - r_pull Cx'Z + gamma u'v.
double cost_j1(const TugOfWarParams& params, const StackedDynamics& dyn, const Vector& u,
               const Vector& v);

/// Exact gradient of cost_j1 with respect to u:
/// q_u u + Su'Q(S0 + Su u + Sv v) - r_pull Su'Cx + gamma v.
Vector grad_j1_u(const TugOfWarParams& params, const StackedDynamics& dyn, const Vector& u,
                 const Vector& v);

/// Elementwise saturating reaction v_i = v_max tanh(kappa(v_bar + c_react u_i)).
Vector exact_br(const TugOfWarParams& params, const Vector& u);

/// Analytic stagewise slope bound of the reaction map over [u_min, u_max];
/// the map acts elementwise, so this equals its vector Lipschitz constant L2.
double br_slope_bound(const TugOfWarParams& params);

/// Wires the benchmark into a GameModel (exact oracle).
GameModel make_game(const TugOfWarParams& params);

/// Analytic regularity constants of the benchmark via
/// quadratic_game_constants.
RegularityConstants constants(const TugOfWarParams& params);

}  // namespace asymgame::tugofwar
