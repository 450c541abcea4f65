#include "asymgame/solver.hpp"

#include "asymgame/analysis.hpp"
#include "asymgame/inexact.hpp"
#include "asymgame/tugofwar.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace asymgame;

namespace {

struct TugFixture {
  tugofwar::TugOfWarParams params;
  GameModel game = tugofwar::make_game(params);
  RegularityConstants constants = tugofwar::constants(params);
  RateReport rates = derive_rates(constants);
  double alpha = 0.5 * rates.alpha_max;
  double rho = contraction_modulus(rates, alpha);
};

}  // namespace

TEST_CASE("t_map contracts random pairs at the certified modulus") {
  const TugFixture fix;
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = fix.game.x1_set.sample_uniform(rng);
    const Vector y = fix.game.x1_set.sample_uniform(rng);
    const double d = (x - y).norm();
    if (d < 1e-9) continue;
    const double td = (t_map(fix.game, fix.alpha, x) - t_map(fix.game, fix.alpha, y)).norm();
    CHECK(td <= 0.48 * d);  // published modulus at alpha = 0.5 alpha_max
    CHECK(td <= fix.rho * d + 1e-9);
  }
}

TEST_CASE("the reference equilibrium is a fixed point of t_map") {
  const TugFixture fix;
  const auto [u_star, v_star] = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);
  CHECK((t_map(fix.game, fix.alpha, u_star) - u_star).norm() <= 1e-10);
  CHECK((fix.game.best_response2(u_star) - v_star).norm() == 0.0);
}

TEST_CASE("unit stepsize solves the decoupled quadratic game in one update") {
  // J1 = (x - c)^2 / 2 with any constant reaction: T(x) = x - (x - c) = c.
  const double c = 0.3;
  const GameModel game = testutil::constant_br_1d_game(c, 0.7);
  for (double x : {-1.0, -0.2, 0.0, 0.5, 1.0}) {
    Vector xv(1);
    xv << x;
    CHECK(t_map(game, 1.0, xv)[0] == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("t_map validates its inputs") {
  const TugFixture fix;
  CHECK_THROWS_AS(t_map(fix.game, 0.0, Vector::Zero(5)), Error);
  CHECK_THROWS_AS(t_map(fix.game, fix.alpha, Vector::Constant(5, 4.0)), Error);
}

TEST_CASE("exact runs decay geometrically from seeded initializations") {
  const TugFixture fix;
  const Equilibrium ref = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);
  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  cfg.alpha_max = fix.rates.alpha_max;

  std::mt19937_64 rng(5);
  for (int run = 0; run < 5; ++run) {
    const Vector init = fix.game.x1_set.sample_uniform(rng);
    const SolveResult res = run_exact(fix.game, cfg, init, ref);
    REQUIRE(res.trace.has_value());
    const IterateTrace& tr = *res.trace;
    REQUIRE(tr.has_reference());
    const double d0 = tr.dist_u.front();

    for (std::size_t k = 0; k < tr.size(); ++k) {
      // Iterates stay feasible; reactions stay within the tolerance band.
      CHECK(fix.game.x1_set.contains(tr.x1[k]));
      CHECK(fix.game.x2_set.contains(tr.x2[k], fix.game.x2_tolerance));
      if (tr.dist_u[k] >= 1e-10) {
        CHECK(tr.dist_u[k] <= std::pow(fix.rho, static_cast<double>(k)) * d0 * (1.0 + 1e-6));
        CHECK(tr.dist_v[k] <=
              fix.constants.L2 * std::pow(fix.rho, static_cast<double>(k)) * d0 * (1.0 + 1e-6));
      }
      if (k + 1 < tr.size() && tr.dist_u[k + 1] >= 1e-10) {
        CHECK(tr.dist_u[k + 1] <= (fix.rho + 0.005) * tr.dist_u[k]);
        CHECK(tr.dist_u[k + 1] <= tr.dist_u[k] * (1.0 + 1e-12));  // nonincreasing to the floor
      }
    }
    CHECK(res.converged);
    CHECK(tr.step_norm[tr.size() - 1] <= cfg.stop_tol);
  }
}

TEST_CASE("starting at the equilibrium converges immediately") {
  const TugFixture fix;
  const Equilibrium ref = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);
  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  const SolveResult res = run_exact(fix.game, cfg, ref.first, ref);
  CHECK(res.converged);
  CHECK(res.iters_used == 1);
  CHECK(res.trace->size() == 1);
  CHECK(res.trace->step_norm[0] <= 1e-10);
}

TEST_CASE("infeasible starts and non-finite gradients are structured errors") {
  const TugFixture fix;
  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  try {
    run_exact(fix.game, cfg, Vector::Constant(5, 10.0), std::nullopt);
    FAIL("expected a feasibility error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }

  GameModel broken = testutil::quadratic_1d_game(0.0, 0.0, 0.0);
  broken.grad1 = [](const Vector&, const Vector&) {
    return Vector::Constant(1, std::nan(""));
  };
  try {
    run_exact(broken, SolverConfig{.alpha = 0.5}, Vector::Zero(1), std::nullopt);
    FAIL("expected a non-finite error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::non_finite);
    CHECK(std::string(e.what()).find("iteration 0") != std::string::npos);
  }
}

TEST_CASE("exact run limit agrees with the grid-search oracle on a tiny game") {
  tugofwar::TugOfWarParams params;
  params.N = 2;
  const GameModel game = tugofwar::make_game(params);
  const RateReport rates = derive_rates(tugofwar::constants(params));
  const double alpha = 0.5 * rates.alpha_max;

  const Equilibrium iterated = compute_reference_equilibrium(game, alpha, 1e-13);
  const int grid = 201;
  const Equilibrium gridded = brute_force_equilibrium(game, grid);
  const double cell = (params.u_max - params.u_min) / (grid - 1);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(iterated.first[i] - gridded.first[i]) <= 2.0 * cell);
  }
}

TEST_CASE("inexact taylor run settles inside the robustness neighborhood") {
  const TugFixture fix;
  const Equilibrium ref = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);
  const auto oracle = inexact::make_taylor_oracle(fix.params);
  const GameModel approx = inexact::with_oracle(fix.game, oracle);
  const auto env =
      robustness_envelopes(fix.rates, fix.constants, fix.alpha, oracle.certified_eps);

  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  cfg.max_iters = 500;
  std::mt19937_64 rng(31);
  const SolveResult res = run_inexact(approx, cfg, fix.game.x1_set.sample_uniform(rng), ref);
  const IterateTrace& tr = *res.trace;

  const double delta_u = tail_limsup(tr.dist_u, fix.rho, cfg.stop_tol);
  const double delta_v = tail_limsup(tr.dist_v, fix.rho, cfg.stop_tol);
  CHECK(delta_u <= 0.1641);  // published u-neighborhood bound
  CHECK(delta_v <= 3.16);    // published v-neighborhood bound (conservative)
  CHECK(delta_u <= env.R_u);
  CHECK(delta_v <= env.R_v);

  // Per-step robustness recursion along the whole trace.
  const double drift = fix.alpha * fix.constants.L12 * oracle.certified_eps;
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    CHECK(tr.dist_u[k + 1] <= fix.rho * tr.dist_u[k] + drift + 1e-9);
  }
}

TEST_CASE("a zero additive perturbation reproduces the exact run bit for bit") {
  const TugFixture fix;
  const Equilibrium ref = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);
  const auto oracle = inexact::additive_oracle(fix.game.best_response2, Vector::Zero(5));
  const GameModel approx = inexact::with_oracle(fix.game, oracle);

  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  std::mt19937_64 rng(17);
  const Vector init = fix.game.x1_set.sample_uniform(rng);
  const SolveResult exact = run_exact(fix.game, cfg, init, ref);
  const SolveResult inexact_run = run_inexact(approx, cfg, init, ref);

  CHECK(exact.iters_used == inexact_run.iters_used);
  CHECK(exact.x1_final == inexact_run.x1_final);
  REQUIRE(exact.trace->size() == inexact_run.trace->size());
  for (std::size_t k = 0; k < exact.trace->size(); ++k) {
    CHECK(exact.trace->x1[k] == inexact_run.trace->x1[k]);
    CHECK(exact.trace->x2[k] == inexact_run.trace->x2[k]);
  }
}

TEST_CASE("reference equilibrium is stable across initializations and tolerances") {
  const TugFixture fix;
  const Equilibrium tight = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13);

  std::mt19937_64 rng(41);
  for (int i = 0; i < 5; ++i) {
    const Vector init = fix.game.x1_set.sample_uniform(rng);
    const Equilibrium again = compute_reference_equilibrium(fix.game, fix.alpha, 1e-13, init);
    CHECK((again.first - tight.first).norm() <= 1e-11);
    CHECK((again.second - tight.second).norm() <= 1e-11);
  }

  const Equilibrium loose = compute_reference_equilibrium(fix.game, fix.alpha, 1e-8);
  CHECK((loose.first - tight.first).norm() <= 1e-7);
}

TEST_CASE("reference equilibrium matches the hand-solved 1-D game") {
  // Stationarity of (x - c)^2/2 + beta x v with v = s x:
  // x* = c / (1 + beta s), interior for these numbers.
  const double c = 0.3, beta = 0.2, s = 0.5;
  const GameModel game = testutil::quadratic_1d_game(c, beta, s);
  const RegularityConstants constants{1.0, 1.0, beta, s};
  const RateReport rates = derive_rates(constants);
  const auto [x_star, v_star] =
      compute_reference_equilibrium(game, 0.5 * rates.alpha_max, 1e-13);
  CHECK(x_star[0] == doctest::Approx(c / (1.0 + beta * s)).epsilon(1e-12));
  CHECK(v_star[0] == doctest::Approx(s * c / (1.0 + beta * s)).epsilon(1e-12));
}

TEST_CASE("reference computation reports non-convergence under a tiny cap") {
  const TugFixture fix;
  try {
    compute_reference_equilibrium(fix.game, fix.alpha, 1e-13, std::nullopt, 3);
    FAIL("expected a convergence error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::no_convergence);
  }
}

TEST_CASE("stepsizes above the certified bound warn but still run") {
  const TugFixture fix;
  SolverConfig cfg;
  cfg.alpha = fix.rates.alpha_max * 1.01;
  cfg.alpha_max = fix.rates.alpha_max;
  cfg.max_iters = 50;
  cfg.stop_tol = 0.0;
  const SolveResult res = run_exact(fix.game, cfg, Vector::Zero(5), std::nullopt);
  REQUIRE(!res.warnings.empty());
  CHECK(res.warnings.front().find("alpha") != std::string::npos);
}

TEST_CASE("identical config and init give identical traces") {
  const TugFixture fix;
  SolverConfig cfg;
  cfg.alpha = fix.alpha;
  std::mt19937_64 rng(53);
  const Vector init = fix.game.x1_set.sample_uniform(rng);
  const SolveResult a = run_exact(fix.game, cfg, init, std::nullopt);
  const SolveResult b = run_exact(fix.game, cfg, init, std::nullopt);
  REQUIRE(a.trace->size() == b.trace->size());
  for (std::size_t k = 0; k < a.trace->size(); ++k) {
    CHECK(a.trace->x1[k] == b.trace->x1[k]);
  }
  CHECK(a.x1_final == b.x1_final);
}

TEST_CASE("tail limsup windows the end of the run") {
  // 100 samples decaying to 0.5; burn-in shorter than the run.
  std::vector<double> dist(100);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    dist[k] = 0.5 + std::pow(0.5, static_cast<double>(k));
  }
  const double est = tail_limsup(dist, 0.5, 1e-3);
  CHECK(est == doctest::Approx(0.5).epsilon(1e-6));

  // A run shorter than the burn-in falls back to the final iterate.
  std::vector<double> brief{3.0, 2.0, 1.0};
  CHECK(tail_limsup(brief, 0.5, 1e-12) == 1.0);
}
