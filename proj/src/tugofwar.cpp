#include "asymgame/tugofwar.hpp"

#include <cmath>
#include <sstream>

namespace asymgame::tugofwar {

void TugOfWarParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(errc::invalid_argument, what); };
  if (N < 1) fail("TugOfWarParams: N must be at least 1");
  if (!(dt > 0.0)) fail("TugOfWarParams: dt must be positive");
  if (!(mass > 0.0)) fail("TugOfWarParams: mass must be positive");
  if (drag < 0.0) fail("TugOfWarParams: drag must be nonnegative");
  if (!(q_u > 0.0)) fail("TugOfWarParams: q_u must be positive");
  if (q_pos < 0.0 || q_vel < 0.0) fail("TugOfWarParams: state penalties must be nonnegative");
  if (!(v_max > 0.0)) fail("TugOfWarParams: v_max must be positive");
  if (!(u_min < u_max)) fail("TugOfWarParams: control bounds must satisfy u_min < u_max");
}

std::vector<std::string> TugOfWarParams::warnings() const {
  std::vector<std::string> out;
  if (dt * drag / mass >= 2.0) {
    std::ostringstream w;
    w << "dt*drag/mass = " << dt * drag / mass
      << " >= 2: the discretization sign-flips the velocity damping";
    out.push_back(w.str());
  }
  return out;
}

StackedDynamics build_dynamics(const TugOfWarParams& params) {
  params.validate();
  const int N = params.N;

  StackedDynamics dyn;
  dyn.Ad = Matrix(2, 2);
  dyn.Ad << 1.0, params.dt, 0.0, 1.0 - params.dt * params.drag / params.mass;
  dyn.Bu = Vector(2);
  dyn.Bu << 0.0, params.dt / params.mass;
  dyn.Bv = -dyn.Bu;

  // Impulse responses Ad^k Bu, k = 0..N-1, fill the block-Toeplitz maps.
  std::vector<Vector> impulse(static_cast<std::size_t>(N));
  impulse[0] = dyn.Bu;
  for (int k = 1; k < N; ++k) impulse[k] = dyn.Ad * impulse[k - 1];

  dyn.Su = Matrix::Zero(2 * N, N);
  for (int t = 1; t <= N; ++t) {
    for (int j = 0; j < t; ++j) {
      dyn.Su.block<2, 1>(2 * (t - 1), j) = impulse[static_cast<std::size_t>(t - 1 - j)];
    }
  }
  dyn.Sv = -dyn.Su;

  dyn.S0 = Vector::Zero(2 * N);  // z0 = (0, 0)
  dyn.Cx = Vector::Zero(2 * N);
  for (int t = 0; t < N; ++t) dyn.Cx[2 * t] = 1.0;
  return dyn;
}

Matrix state_weight_matrix(const TugOfWarParams& params) {
  Matrix Q = Matrix::Zero(2 * params.N, 2 * params.N);
  for (int t = 0; t < params.N; ++t) {
    Q(2 * t, 2 * t) = params.q_pos;
    Q(2 * t + 1, 2 * t + 1) = params.q_vel;
  }
  return Q;
}

double cost_j1(const TugOfWarParams& params, const StackedDynamics& dyn, const Vector& u,
               const Vector& v) {
  ensure_same_dim(u, v, "cost_j1");
  if (u.size() != params.N) {
    throw Error(errc::dimension_mismatch, "cost_j1: decision vectors must have length N");
  }
  Vector z = dyn.S0;
  z.noalias() += dyn.Su * u;
  z.noalias() += dyn.Sv * v;

  double state_cost = 0.0;
  double pull = 0.0;
  for (int t = 0; t < params.N; ++t) {
    const double p = z[2 * t];
    const double w = z[2 * t + 1];
    state_cost += params.q_pos * p * p + params.q_vel * w * w;
    pull += p;
  }
  return 0.5 * params.q_u * u.squaredNorm() + 0.5 * state_cost - params.r_pull * pull +
         params.gamma * u.dot(v);
}

Vector grad_j1_u(const TugOfWarParams& params, const StackedDynamics& dyn, const Vector& u,
                 const Vector& v) {
  ensure_same_dim(u, v, "grad_j1_u");
  if (u.size() != params.N) {
    throw Error(errc::dimension_mismatch, "grad_j1_u: decision vectors must have length N");
  }
  Vector z = dyn.S0;
  z.noalias() += dyn.Su * u;
  z.noalias() += dyn.Sv * v;
  Vector weighted(2 * params.N);
  for (int t = 0; t < params.N; ++t) {
    weighted[2 * t] = params.q_pos * z[2 * t];
    weighted[2 * t + 1] = params.q_vel * z[2 * t + 1];
  }
  Vector grad = params.q_u * u;
  grad.noalias() += dyn.Su.transpose() * weighted;
  grad.noalias() -= params.r_pull * (dyn.Su.transpose() * dyn.Cx);
  grad.noalias() += params.gamma * v;
  return grad;
}

Vector exact_br(const TugOfWarParams& params, const Vector& u) {
  if (u.size() != params.N) {
    throw Error(errc::dimension_mismatch, "exact_br: input must have length N");
  }
  Vector v(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    v[i] = params.v_max * std::tanh(params.kappa * (params.v_bar + params.c_react * u[i]));
  }
  return v;
}

double br_slope_bound(const TugOfWarParams& params) {
  // |b'(u)| = v_max |kappa c_react| sech^2(kappa(v_bar + c_react u)); sech^2
  // peaks at argument 0, otherwise at the endpoint argument closest to 0.
  const double a = params.kappa * (params.v_bar + params.c_react * params.u_min);
  const double b = params.kappa * (params.v_bar + params.c_react * params.u_max);
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double sech2 = 1.0;
  if (!(lo <= 0.0 && 0.0 <= hi)) {
    const double t = std::min(std::abs(lo), std::abs(hi));
    const double c = std::cosh(t);
    sech2 = 1.0 / (c * c);
  }
  return params.v_max * std::abs(params.kappa * params.c_react) * sech2;
}

GameModel make_game(const TugOfWarParams& params) {
  params.validate();
  const StackedDynamics dyn = build_dynamics(params);
  GameModel game{
      BoxSet::cube(params.N, params.u_min, params.u_max),
      BoxSet::cube(params.N, -params.v_max, params.v_max),
      [params, dyn](const Vector& u, const Vector& v) { return cost_j1(params, dyn, u, v); },
      [params, dyn](const Vector& u, const Vector& v) { return grad_j1_u(params, dyn, u, v); },
      [params](const Vector& u) { return exact_br(params, u); },
  };
  return game;
}

RegularityConstants constants(const TugOfWarParams& params) {
  const StackedDynamics dyn = build_dynamics(params);
  return quadratic_game_constants(params.q_u, state_weight_matrix(params), dyn.Su, dyn.Sv,
                                  params.gamma, br_slope_bound(params));
}

}  // namespace asymgame::tugofwar
