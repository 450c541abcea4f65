#pragma once

#include "asymgame/game_model.hpp"
#include "asymgame/solver.hpp"
#include "asymgame/types.hpp"

#include <functional>

namespace asymgame {

/// Regularity constants of the game: strong convexity and smoothness of
/// J1(., x2), cross-gradient sensitivity, and the reaction-map Lipschitz
/// constant.
struct RegularityConstants {
  double mu;   // strong convexity modulus of J1(., x2), > 0
  double L1;   // smoothness of J1(., x2), >= mu
  double L12;  // Lipschitz constant of x2 -> grad1(x1, x2), >= 0
  double L2;   // Lipschitz constant of the best-response map, >= 0
};

/// Derived rate quantities. When the dominance condition mu > L12*L2 fails,
/// unique is false and alpha_max is NaN.
struct RateReport {
  double m;          // mu - L12*L2, monotonicity margin of G
  double L_G;        // L1 + L12*L2, Lipschitz constant of G
  double alpha_max;  // 2m/L_G^2
  bool unique;       // m > 0
};

struct RobustnessEnvelopes {
  double R_u;  // alpha*L12*eps / (1 - rho(alpha))
  double R_v;  // L2*R_u + eps
};

/// Sampled estimates of the composite-operator bounds; lower/upper empirical
/// witnesses of the analytic m, L_G, L12, L2.
struct EmpiricalEstimates {
  double m;    // min over pairs of <G(x)-G(y), x-y> / ||x-y||^2
  double L_G;  // max over pairs of ||G(x)-G(y)|| / ||x-y||
  double L12;  // max over pairs of ||grad1(u,v)-grad1(u,w)|| / ||v-w||
  double L2;   // max over pairs of ||BR2(x)-BR2(y)|| / ||x-y||
  int samples = 0;
};

RateReport derive_rates(const RegularityConstants& constants);

/// rho(alpha) = sqrt(1 - 2*alpha*m + alpha^2*L_G^2). Requires
/// 0 < alpha < alpha_max (otherwise the modulus is not a contraction rate).
double contraction_modulus(const RateReport& report, double alpha);

RobustnessEnvelopes robustness_envelopes(const RateReport& report,
                                         const RegularityConstants& constants, double alpha,
                                         double epsilon);

/// Constants of a quadratic game J1(u,v) = (q_u/2)||u||^2 + (1/2) Z'QZ + ...
/// with stacked prediction Z = S0 + S_u u + S_v v and bilinear coupling
/// gamma*u'v:
///   mu  = lambda_min(q_u I + S_u'Q S_u)     L1  = lambda_max(same)
///   L12 = ||S_u'Q S_v + gamma I||_2          L2  = br_slope_max
RegularityConstants quadratic_game_constants(double q_u, const Matrix& Q, const Matrix& S_u,
                                             const Matrix& S_v, double gamma,
                                             double br_slope_max);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h) per coordinate.
Vector finite_difference_gradient(const std::function<double(const Vector&)>& cost,
                                  const Vector& x, double h);

/// Ratio statistics over `samples` random pairs drawn from the feasible sets.
/// Degenerate pairs (||x-y|| < 1e-12) are rejected and resampled.
EmpiricalEstimates empirical_constants(const GameModel& game, int samples, unsigned seed);

/// Independent equilibrium oracle for tiny instances (dim(X1) <= 3): full
/// grid enumeration of candidates; each candidate x1 is scored by the
/// distance to the grid minimizer of J1(., BR2(x1)), and the best-scoring
/// candidate is returned with its reaction. The inner grid minimization uses
/// per-coordinate descent with unimodal line searches plus an exhaustive
/// local window, so J1(., x2) must be convex along coordinate lines (the
/// strongly convex game class guarantees this). Cost grows exponentially in
/// the dimension.
Equilibrium brute_force_equilibrium(const GameModel& game, int grid_points_per_dim);

}  // namespace asymgame
