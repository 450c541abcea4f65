#include "asymgame/analysis.hpp"

#include "asymgame/tugofwar.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace asymgame;

namespace {

// Published constants of the benchmark instance, used as rate inputs.
const RegularityConstants kPublished{0.3502, 0.3725, 0.0125, 0.9720};

}  // namespace

TEST_CASE("derive_rates reproduces the published rate quantities") {
  const RateReport r = derive_rates(kPublished);
  CHECK(std::abs(r.m - 0.33805) <= 1e-3);
  CHECK(std::abs(r.L_G - 0.38465) <= 1e-3);
  CHECK(std::abs(r.alpha_max - 4.57) <= 0.01);
  CHECK(r.unique);
}

TEST_CASE("decoupling and the dominance boundary behave as limits") {
  const RateReport decoupled = derive_rates({0.5, 0.8, 0.0, 3.0});
  CHECK(decoupled.m == 0.5);
  CHECK(decoupled.L_G == 0.8);

  const RateReport boundary = derive_rates({0.5, 0.8, 1.0, 0.5});  // mu == L12*L2
  CHECK(boundary.m == 0.0);
  CHECK_FALSE(boundary.unique);
  CHECK(std::isnan(boundary.alpha_max));
}

TEST_CASE("contraction modulus matches the published value at half the bound") {
  const RateReport r = derive_rates(kPublished);
  const double rho = contraction_modulus(r, 0.5 * r.alpha_max);
  CHECK(std::abs(rho - 0.48) <= 0.005);
}

TEST_CASE("contraction modulus limits and minimizer") {
  const RateReport r = derive_rates(kPublished);

  const double near_zero = contraction_modulus(r, 1e-9);
  CHECK(near_zero < 1.0);
  CHECK(near_zero > 1.0 - 1e-8);

  // alpha = m / L_G^2 minimizes the quadratic under the square root.
  const double alpha_star = r.m / (r.L_G * r.L_G);
  const double rho_star = contraction_modulus(r, alpha_star);
  CHECK(rho_star ==
        doctest::Approx(std::sqrt(1.0 - r.m * r.m / (r.L_G * r.L_G))).epsilon(1e-12));
  for (int i = 1; i < 1000; ++i) {
    const double alpha = r.alpha_max * i / 1000.0;
    CHECK(contraction_modulus(r, alpha) >= rho_star - 1e-12);
  }
}

TEST_CASE("contraction modulus is pure algebra") {
  const RateReport r = derive_rates(kPublished);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) {
    const double alpha = unit(rng) * r.alpha_max;
    const double rho = contraction_modulus(r, alpha);
    const double identity = rho * rho + 2.0 * alpha * r.m - alpha * alpha * r.L_G * r.L_G;
    CHECK(identity == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("stepsizes outside the admissible interval are rejected") {
  const RateReport r = derive_rates(kPublished);
  CHECK_THROWS_AS(contraction_modulus(r, 0.0), Error);
  CHECK_THROWS_AS(contraction_modulus(r, -1.0), Error);
  CHECK_THROWS_AS(contraction_modulus(r, r.alpha_max), Error);
  CHECK_THROWS_AS(contraction_modulus(r, 2.0 * r.alpha_max), Error);

  const RateReport degenerate = derive_rates({0.5, 0.8, 1.0, 0.6});  // m < 0
  try {
    contraction_modulus(degenerate, 0.1);
    FAIL("expected the rate condition to be reported");
  } catch (const Error& e) {
    CHECK(e.code() == errc::rate_condition_violated);
    CHECK(std::string(e.what()).find("mu > L12*L2") != std::string::npos);
  }
}

TEST_CASE("robustness envelopes reproduce the published bounds") {
  const RateReport r = derive_rates(kPublished);
  const double alpha = 2.285;
  const auto env = robustness_envelopes(r, kPublished, alpha, 3.01);
  CHECK(std::abs(env.R_u - 0.164) <= 0.002);
  CHECK(std::abs(env.R_v - 3.17) <= 0.02);

  const auto zero = robustness_envelopes(r, kPublished, alpha, 0.0);
  CHECK(zero.R_u == 0.0);
  CHECK(zero.R_v == 0.0);

  const auto once = robustness_envelopes(r, kPublished, alpha, 0.37);
  const auto twice = robustness_envelopes(r, kPublished, alpha, 2.0 * 0.37);
  CHECK(twice.R_u == 2.0 * once.R_u);  // exact linearity in eps

  CHECK_THROWS_AS(robustness_envelopes(r, kPublished, alpha, -1.0), Error);
}

TEST_CASE("quadratic game constants reproduce the benchmark values") {
  const tugofwar::TugOfWarParams params;
  const RegularityConstants c = tugofwar::constants(params);
  CHECK(std::abs(c.mu - 0.3502) <= 1e-3);
  CHECK(std::abs(c.L1 - 0.3725) <= 1e-3);
  CHECK(std::abs(c.L12 - 0.0125) <= 1e-3);
  CHECK(std::abs(c.L2 - 0.9720) <= 1e-3);
}

TEST_CASE("a pure control penalty collapses the constants") {
  tugofwar::TugOfWarParams params;
  params.q_pos = 0.0;
  params.q_vel = 0.0;
  params.gamma = 0.0;
  const RegularityConstants c = tugofwar::constants(params);
  CHECK(c.mu == doctest::Approx(params.q_u).epsilon(1e-14));
  CHECK(c.L1 == doctest::Approx(params.q_u).epsilon(1e-14));
  CHECK(c.L12 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("the tanh slope bound matches a dense grid maximization") {
  const tugofwar::TugOfWarParams p;
  const double bound = tugofwar::br_slope_bound(p);
  // v_max * kappa * c_react * max sech^2; sech^2 <= 1 with equality at 0.
  CHECK(bound == doctest::Approx(1.8 * 0.6 * 0.9).epsilon(1e-14));

  double grid_max = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double u = p.u_min + (p.u_max - p.u_min) * i / 20000.0;
    const double arg = p.kappa * (p.v_bar + p.c_react * u);
    const double sech2 = 1.0 / (std::cosh(arg) * std::cosh(arg));
    grid_max = std::max(grid_max, p.v_max * p.kappa * p.c_react * sech2);
  }
  CHECK(grid_max <= bound + 1e-12);
  CHECK(grid_max >= bound - 1e-4);  // the grid brushes the maximizer
}

TEST_CASE("non-symmetric state weights are rejected") {
  Matrix q(2, 2);
  q << 1.0, 0.5, 0.0, 1.0;
  const Matrix s = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(quadratic_game_constants(1.0, q, s, -s, 0.0, 1.0), Error);
}

TEST_CASE("finite differences recover analytic gradients") {
  const tugofwar::TugOfWarParams params;
  const auto dyn = tugofwar::build_dynamics(params);
  std::mt19937_64 rng(8);
  const BoxSet ubox = BoxSet::cube(params.N, params.u_min, params.u_max);
  const BoxSet vbox = BoxSet::cube(params.N, -params.v_max, params.v_max);
  for (int i = 0; i < 10; ++i) {
    const Vector u = ubox.sample_uniform(rng);
    const Vector v = vbox.sample_uniform(rng);
    const Vector analytic = tugofwar::grad_j1_u(params, dyn, u, v);
    const Vector numeric = finite_difference_gradient(
        [&](const Vector& x) { return tugofwar::cost_j1(params, dyn, x, v); }, u, 1e-5);
    CHECK((numeric - analytic).norm() / analytic.norm() <= 1e-6);
  }
}

TEST_CASE("finite differences on simple functions") {
  const Vector zero = finite_difference_gradient([](const Vector&) { return 4.2; },
                                                 Vector::Constant(3, 1.0), 1e-5);
  CHECK(zero.norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

  Vector x(2);
  x << 1.0, 2.0;
  const Vector grad = finite_difference_gradient(
      [](const Vector& p) { return 0.5 * p.squaredNorm(); }, x, 1e-5);
  CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(grad[1] == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(finite_difference_gradient([](const Vector&) { return 0.0; }, x, 0.0), Error);
  CHECK_THROWS_AS(finite_difference_gradient(
                      [](const Vector&) { return std::nan(""); }, x, 1e-5),
                  Error);
}

TEST_CASE("sampled estimates are bracketed by the analytic constants") {
  const tugofwar::TugOfWarParams params;
  const GameModel game = tugofwar::make_game(params);
  const EmpiricalEstimates est = empirical_constants(game, 10000, 123);
  CHECK(est.L_G <= 0.38465 + 1e-6);
  CHECK(est.m >= 0.33805 - 1e-6);
  CHECK(est.L2 <= 0.9720 + 1e-9);

  const RateReport rates = derive_rates(tugofwar::constants(params));
  CHECK(est.L_G <= rates.L_G + 1e-6);
  CHECK(est.m >= rates.m - 1e-6);

  CHECK_THROWS_AS(empirical_constants(game, 1, 0), Error);
}

TEST_CASE("sampled estimates are exact for a linear operator") {
  // G(x) = 2x realized as grad1(x, .) = 2x with a centered constant reaction.
  GameModel game{
      BoxSet::cube(2, -1.0, 1.0),
      BoxSet::cube(2, -1.0, 1.0),
      [](const Vector& x, const Vector&) { return x.squaredNorm(); },
      [](const Vector& x, const Vector&) { return Vector(2.0 * x); },
      [](const Vector& x) { return Vector(Vector::Zero(x.size())); },
  };
  const EmpiricalEstimates est = empirical_constants(game, 500, 7);
  CHECK(est.L_G == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.m == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est.L2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("grid oracle matches the hand-solved 1-D equilibria") {
  // Interior equilibrium x* = c / (1 + beta s) = 3/11.
  const GameModel game = testutil::quadratic_1d_game(0.3, 0.2, 0.5);
  const int grid = 401;
  const auto [x_star, v_star] = brute_force_equilibrium(game, grid);
  const double cell = 2.0 / (grid - 1);
  CHECK(std::abs(x_star[0] - 3.0 / 11.0) <= cell);
  CHECK(v_star[0] == doctest::Approx(0.5 * x_star[0]).epsilon(1e-12));
}

TEST_CASE("grid oracle reduces to plain minimization for a constant reaction") {
  const GameModel game = testutil::constant_br_1d_game(0.3, 0.25);
  const auto [x_star, v_star] = brute_force_equilibrium(game, 401);
  const double cell = 2.0 / 400;
  CHECK(std::abs(x_star[0] - 0.3) <= cell);
  CHECK(v_star[0] == 0.25);
}

TEST_CASE("grid oracle matches a fully exhaustive double-grid reference") {
  // Small enough that the quadratic-cost shortcut-free reference (full inner
  // enumeration for every candidate) is affordable.
  tugofwar::TugOfWarParams params;
  params.N = 2;
  const GameModel game = tugofwar::make_game(params);
  const int g = 31;
  const double lo = params.u_min;
  const double step = (params.u_max - params.u_min) / (g - 1);

  Vector best_cand(2);
  double best_mismatch = std::numeric_limits<double>::infinity();
  Vector cand(2), probe(2);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      cand << lo + step * i, lo + step * j;
      const Vector v = game.best_response2(cand);
      Vector argmin(2);
      double best_cost = std::numeric_limits<double>::infinity();
      for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
          probe << lo + step * a, lo + step * b;
          const double c = game.cost1(probe, v);
          if (c < best_cost) {
            best_cost = c;
            argmin = probe;
          }
        }
      }
      const double mismatch = (cand - argmin).norm();
      if (mismatch < best_mismatch) {
        best_mismatch = mismatch;
        best_cand = cand;
      }
    }
  }

  const auto [fast, fast_v] = brute_force_equilibrium(game, g);
  CHECK(fast == best_cand);
  CHECK(fast_v == game.best_response2(best_cand));
}

TEST_CASE("grid oracle rejects high dimensions and degenerate grids") {
  tugofwar::TugOfWarParams params;
  params.N = 4;
  const GameModel game = tugofwar::make_game(params);
  try {
    brute_force_equilibrium(game, 11);
    FAIL("expected a dimension refusal");
  } catch (const Error& e) {
    CHECK(e.code() == errc::unsupported);
  }

  const GameModel small = testutil::quadratic_1d_game(0.0, 0.0, 0.0);
  CHECK_THROWS_AS(brute_force_equilibrium(small, 1), Error);
}
