#include "asymgame/game_model.hpp"

#include <sstream>

namespace asymgame {

Vector GameModel::best_response_checked(const Vector& x1) const {
  Vector x2 = best_response2(x1);
  ensure_finite(x2, oracle_name + " output");
  ensure_same_dim(x2, x2_set.lower(), oracle_name + " output");
  if (!x2_set.contains(x2, x2_tolerance)) {
    std::ostringstream msg;
    msg << "oracle '" << oracle_name << "' returned a point outside X2 (tolerance "
        << x2_tolerance << ")";
    throw Error(errc::oracle_out_of_range, msg.str());
  }
  return x2;
}

Vector GameModel::composite_gradient(const Vector& x1) const {
  const Vector x2 = best_response_checked(x1);
  Vector g = grad1(x1, x2);
  ensure_finite(g, "grad1 output");
  ensure_same_dim(g, x1_set.lower(), "grad1 output");
  return g;
}

}  // namespace asymgame
