#pragma once

#include "asymgame/game_model.hpp"
#include "asymgame/tugofwar.hpp"
#include "asymgame/types.hpp"

#include <functional>
#include <string>

namespace asymgame::inexact {

enum class OracleKind {
  taylor_at_zero,     // first-order expansion of the tanh reaction about u = 0
  additive_constant,  // exact oracle plus a fixed shift d
};

/// Approximate best-response oracle with a certified uniform l2 error bound
/// over X1: certified_eps >= sup_u ||approx(u) - exact(u)||.
struct ApproxOracle {
  OracleKind kind;
  std::function<Vector(const Vector&)> map;
  double certified_eps = 0.0;
  /// How far outputs may exit X2 per coordinate: the exact oracle stays
  /// inside, so the deviation bound also bounds the overshoot. Additive:
  /// ||d||_inf; Taylor: the stagewise error certificate.
  double overshoot_linf = 0.0;
  Vector shift;  // additive_constant only
  std::string name;
};

/// Stagewise Taylor map b_hat(u) = v_max tanh(kappa v_bar) + slope * u with
/// slope = v_max kappa c_react sech^2(kappa v_bar), applied elementwise.
Vector taylor_br(const tugofwar::TugOfWarParams& params, const Vector& u);

/// The Taylor map's slope (its own Lipschitz constant).
double taylor_slope(const tugofwar::TugOfWarParams& params);

/// Certified uniform error of the oracle over X1. Taylor: sqrt(N) times the
/// stagewise sup of |b_hat - b|, maximized on a dense grid including both
/// endpoints and inflated by the error slope times half the grid spacing so
/// the result stays an upper bound. Additive: ||d||_2 exactly.
double certify_epsilon(const tugofwar::TugOfWarParams& params, const ApproxOracle& oracle,
                       int grid_points);

ApproxOracle make_taylor_oracle(const tugofwar::TugOfWarParams& params, int grid_points = 10000);

/// u -> exact(u) + d with certified_eps = ||d||_2. The perturbed output may
/// exit X2 by up to ||d||_inf; widen the game's membership band accordingly
/// (with_oracle does).
ApproxOracle additive_oracle(const std::function<Vector(const Vector&)>& exact, const Vector& d);

/// Copy of the game driven by the approximate oracle; the X2 membership
/// tolerance is widened by the oracle's certified overshoot.
GameModel with_oracle(const GameModel& game, const ApproxOracle& oracle);

}  // namespace asymgame::inexact
