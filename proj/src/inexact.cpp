#include "asymgame/inexact.hpp"

#include <algorithm>
#include <cmath>

namespace asymgame::inexact {

Vector taylor_br(const tugofwar::TugOfWarParams& params, const Vector& u) {
  if (u.size() != params.N) {
    throw Error(errc::dimension_mismatch, "taylor_br: input must have length N");
  }
  const double offset = params.v_max * std::tanh(params.kappa * params.v_bar);
  const double slope = taylor_slope(params);
  return Vector::Constant(u.size(), offset) + slope * u;
}

double taylor_slope(const tugofwar::TugOfWarParams& params) {
  const double c = std::cosh(params.kappa * params.v_bar);
  return params.v_max * params.kappa * params.c_react / (c * c);
}

double certify_epsilon(const tugofwar::TugOfWarParams& params, const ApproxOracle& oracle,
                       int grid_points) {
  if (oracle.kind == OracleKind::additive_constant) {
    return oracle.shift.norm();
  }
  if (grid_points < 3) {
    throw Error(errc::invalid_argument, "certify_epsilon: need at least 3 grid points");
  }
  // Stagewise error of the Taylor map on a dense grid over [u_min, u_max]
  // (endpoints included), inflated by the error slope times half the spacing
  // so the result upper-bounds the true sup.
  const double offset = params.v_max * std::tanh(params.kappa * params.v_bar);
  const double slope = taylor_slope(params);
  const double spacing = (params.u_max - params.u_min) / (grid_points - 1);
  double stage = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double u = params.u_min + spacing * i;
    const double exact = params.v_max * std::tanh(params.kappa * (params.v_bar + params.c_react * u));
    stage = std::max(stage, std::abs(offset + slope * u - exact));
  }
  const double error_slope = std::abs(slope) + tugofwar::br_slope_bound(params);
  stage += error_slope * spacing / 2.0;
  return std::sqrt(static_cast<double>(params.N)) * stage;
}

ApproxOracle make_taylor_oracle(const tugofwar::TugOfWarParams& params, int grid_points) {
  ApproxOracle oracle;
  oracle.kind = OracleKind::taylor_at_zero;
  oracle.map = [params](const Vector& u) { return taylor_br(params, u); };
  oracle.name = "taylor-BR2";
  oracle.certified_eps = certify_epsilon(params, oracle, grid_points);
  oracle.overshoot_linf = oracle.certified_eps / std::sqrt(static_cast<double>(params.N));
  return oracle;
}

ApproxOracle additive_oracle(const std::function<Vector(const Vector&)>& exact, const Vector& d) {
  ensure_finite(d, "additive_oracle: shift");
  ApproxOracle oracle;
  oracle.kind = OracleKind::additive_constant;
  oracle.map = [exact, d](const Vector& u) -> Vector { return exact(u) + d; };
  oracle.shift = d;
  oracle.certified_eps = d.norm();
  oracle.overshoot_linf = d.size() > 0 ? d.cwiseAbs().maxCoeff() : 0.0;
  oracle.name = "additive-BR2";
  return oracle;
}

GameModel with_oracle(const GameModel& game, const ApproxOracle& oracle) {
  GameModel out = game;
  out.best_response2 = oracle.map;
  out.oracle_name = oracle.name;
  out.x2_tolerance = game.x2_tolerance + oracle.overshoot_linf;
  return out;
}

}  // namespace asymgame::inexact
