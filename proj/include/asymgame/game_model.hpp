#pragma once

#include "asymgame/box_set.hpp"
#include "asymgame/types.hpp"

#include <functional>
#include <string>

namespace asymgame {

/// Two-player game as seen by Player 1: its own cost and gradient oracles,
/// and Player 2 accessible only through a best-response map. All oracles are
/// pure functions; the model is safe to share across threads.
struct GameModel {
  BoxSet x1_set;
  BoxSet x2_set;

  /// J1(x1, x2).
  std::function<double(const Vector&, const Vector&)> cost1;
  /// Gradient of J1 with respect to x1.
  std::function<Vector(const Vector&, const Vector&)> grad1;
  /// Player 2's reaction map (exact, or an approximation thereof).
  std::function<Vector(const Vector&)> best_response2;

  /// Used in diagnostics when the oracle output falls outside x2_set.
  std::string oracle_name = "BR2";
  /// Membership tolerance for oracle outputs; saturating maps can land on the
  /// boundary up to rounding, additive perturbations widen the band further.
  double x2_tolerance = 1e-9;

  /// Evaluates best_response2 and verifies the output lies in x2_set within
  /// x2_tolerance (throws Error{oracle_out_of_range} naming the oracle).
  Vector best_response_checked(const Vector& x1) const;

  /// Composite gradient G(x1) = grad1(x1, BR2(x1)), the operator whose
  /// Lipschitz constant is L_G and monotonicity margin is m.
  Vector composite_gradient(const Vector& x1) const;
};

}  // namespace asymgame
