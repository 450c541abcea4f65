#include "asymgame/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace asymgame {

namespace {

void validate_constants(const RegularityConstants& c) {
  if (!(c.mu > 0.0)) {
    throw Error(errc::invalid_argument, "RegularityConstants: mu must be positive");
  }
  if (!(c.L1 >= c.mu)) {
    throw Error(errc::invalid_argument, "RegularityConstants: L1 must be at least mu");
  }
  if (!(c.L12 >= 0.0) || !(c.L2 >= 0.0)) {
    throw Error(errc::invalid_argument, "RegularityConstants: L12 and L2 must be nonnegative");
  }
}

void require_contractive_alpha(const RateReport& report, double alpha) {
  if (!report.unique) {
    throw Error(errc::rate_condition_violated,
                "no contractive stepsize exists: uniqueness condition mu > L12*L2 fails (m <= 0)");
  }
  if (!(alpha > 0.0 && alpha < report.alpha_max)) {
    std::ostringstream msg;
    msg << "stepsize alpha=" << alpha << " outside the contractive interval (0, "
        << report.alpha_max << ")";
    throw Error(errc::invalid_argument, msg.str());
  }
}

}  // namespace

RateReport derive_rates(const RegularityConstants& constants) {
  validate_constants(constants);
  RateReport report;
  report.m = constants.mu - constants.L12 * constants.L2;
  report.L_G = constants.L1 + constants.L12 * constants.L2;
  report.unique = report.m > 0.0;
  report.alpha_max = report.unique ? 2.0 * report.m / (report.L_G * report.L_G)
                                   : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double contraction_modulus(const RateReport& report, double alpha) {
  require_contractive_alpha(report, alpha);
  const double q = 1.0 - 2.0 * alpha * report.m + alpha * alpha * report.L_G * report.L_G;
  // q lies in [0, 1) on the admissible interval; clamp rounding noise.
  return std::sqrt(std::max(q, 0.0));
}

RobustnessEnvelopes robustness_envelopes(const RateReport& report,
                                         const RegularityConstants& constants, double alpha,
                                         double epsilon) {
  if (epsilon < 0.0) {
    throw Error(errc::invalid_argument, "robustness_envelopes: epsilon must be nonnegative");
  }
  const double rho = contraction_modulus(report, alpha);
  RobustnessEnvelopes env;
  env.R_u = alpha * constants.L12 * epsilon / (1.0 - rho);
  env.R_v = constants.L2 * env.R_u + epsilon;
  return env;
}

RegularityConstants quadratic_game_constants(double q_u, const Matrix& Q, const Matrix& S_u,
                                             const Matrix& S_v, double gamma,
                                             double br_slope_max) {
  if (!(q_u > 0.0)) {
    throw Error(errc::invalid_argument, "quadratic_game_constants: q_u must be positive");
  }
  if (br_slope_max < 0.0) {
    throw Error(errc::invalid_argument,
                "quadratic_game_constants: br_slope_max must be nonnegative");
  }
  if (Q.rows() != Q.cols()) {
    throw Error(errc::dimension_mismatch, "quadratic_game_constants: Q must be square");
  }
  if (S_u.rows() != Q.rows() || S_v.rows() != Q.rows() || S_u.cols() != S_v.cols()) {
    throw Error(errc::dimension_mismatch,
                "quadratic_game_constants: S_u, S_v, Q dimensions are inconsistent");
  }
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(errc::invalid_argument, "quadratic_game_constants: Q is not symmetric");
  }

  const Eigen::Index n = S_u.cols();
  Matrix hessian = q_u * Matrix::Identity(n, n) + S_u.transpose() * Q * S_u;
  hessian = 0.5 * (hessian + hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hessian);
  if (eig.info() != Eigen::Success) {
    throw Error(errc::invalid_argument, "quadratic_game_constants: eigensolver failed");
  }

  const Matrix cross = S_u.transpose() * Q * S_v + gamma * Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(cross);

  RegularityConstants constants;
  constants.mu = eig.eigenvalues().minCoeff();
  constants.L1 = eig.eigenvalues().maxCoeff();
  constants.L12 = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  constants.L2 = br_slope_max;
  return constants;
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& cost,
                                  const Vector& x, double h) {
  if (!(h > 0.0)) {
    throw Error(errc::invalid_argument, "finite_difference_gradient: h must be positive");
  }
  ensure_finite(x, "finite_difference_gradient: x");
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double forward = cost(probe);
    probe[i] = x[i] - h;
    const double backward = cost(probe);
    probe[i] = x[i];
    ensure_finite(forward, "finite_difference_gradient: cost evaluation");
    ensure_finite(backward, "finite_difference_gradient: cost evaluation");
    grad[i] = (forward - backward) / (2.0 * h);
  }
  return grad;
}

EmpiricalEstimates empirical_constants(const GameModel& game, int samples, unsigned seed) {
  if (samples < 2) {
    throw Error(errc::invalid_argument, "empirical_constants: need at least 2 samples");
  }
  std::mt19937_64 rng(seed);
  constexpr double kDegenerate = 1e-12;
  constexpr int kMaxRetries = 100;

  auto draw_pair = [&](const BoxSet& set) {
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
      Vector a = set.sample_uniform(rng);
      Vector b = set.sample_uniform(rng);
      if ((a - b).norm() >= kDegenerate) return std::make_pair(a, b);
    }
    throw Error(errc::invalid_argument,
                "empirical_constants: could not sample a nondegenerate pair (box too small?)");
  };

  EmpiricalEstimates est;
  est.m = std::numeric_limits<double>::infinity();
  est.L_G = 0.0;
  est.L12 = 0.0;
  est.L2 = 0.0;
  est.samples = samples;

  for (int s = 0; s < samples; ++s) {
    const auto [x, y] = draw_pair(game.x1_set);
    const Vector brx = game.best_response_checked(x);
    const Vector bry = game.best_response_checked(y);
    const Vector gx = game.grad1(x, brx);
    const Vector gy = game.grad1(y, bry);
    const double d = (x - y).norm();
    est.L_G = std::max(est.L_G, (gx - gy).norm() / d);
    est.m = std::min(est.m, (gx - gy).dot(x - y) / (d * d));
    est.L2 = std::max(est.L2, (brx - bry).norm() / d);

    const Vector u = game.x1_set.sample_uniform(rng);
    const auto [v, w] = draw_pair(game.x2_set);
    est.L12 =
        std::max(est.L12, (game.grad1(u, v) - game.grad1(u, w)).norm() / (v - w).norm());
  }
  return est;
}

namespace {

// Grid coordinates along one axis of the box.
struct GridAxis {
  double lo;
  double step;
  int points;
  double value(int idx) const { return lo + step * idx; }
};

// Exact argmin of a strictly unimodal sequence f(0..count-1): binary search
// for the first index where f stops decreasing.
template <typename LineCost>
int line_argmin(const LineCost& f, int count) {
  int lo = 0;
  int hi = count - 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (f(mid) <= f(mid + 1)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

Equilibrium brute_force_equilibrium(const GameModel& game, int grid_points_per_dim) {
  const Eigen::Index n = game.x1_set.dim();
  if (n > 3) {
    std::ostringstream msg;
    msg << "brute_force_equilibrium: dim(X1)=" << n
        << " too large for grid enumeration (limit 3)";
    throw Error(errc::unsupported, msg.str());
  }
  if (grid_points_per_dim < 2) {
    throw Error(errc::invalid_argument,
                "brute_force_equilibrium: need at least 2 grid points per dimension");
  }

  const int g = grid_points_per_dim;
  std::vector<GridAxis> axes(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    axes[i] = {game.x1_set.lower()[i],
               (game.x1_set.upper()[i] - game.x1_set.lower()[i]) / (g - 1), g};
  }

  Vector probe(n);
  auto set_from_indices = [&](const std::vector<int>& idx, Vector& out) {
    for (Eigen::Index i = 0; i < n; ++i) out[i] = axes[i].value(idx[i]);
  };

  // Grid argmin of J1(., v): coordinate descent with exact unimodal line
  // searches, then an exhaustive +/-2 window to clear any off-axis stall.
  auto inner_argmin = [&](const std::vector<int>& start, const Vector& v) {
    std::vector<int> idx = start;
    set_from_indices(idx, probe);

    constexpr int kMaxSweeps = 50;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool changed = false;
      for (Eigen::Index d = 0; d < n; ++d) {
        auto line_cost = [&](int j) {
          probe[d] = axes[d].value(j);
          return game.cost1(probe, v);
        };
        const int best = line_argmin(line_cost, g);
        probe[d] = axes[d].value(best);
        if (best != idx[d]) {
          idx[d] = best;
          changed = true;
        }
      }
      if (!changed) break;
    }

    std::vector<int> window_lo(static_cast<std::size_t>(n)), window_hi(static_cast<std::size_t>(n));
    for (Eigen::Index d = 0; d < n; ++d) {
      window_lo[d] = std::max(0, idx[d] - 2);
      window_hi[d] = std::min(g - 1, idx[d] + 2);
    }
    std::vector<int> cursor = window_lo;
    std::vector<int> best_idx = idx;
    set_from_indices(idx, probe);
    double best_cost = game.cost1(probe, v);
    while (true) {
      set_from_indices(cursor, probe);
      const double c = game.cost1(probe, v);
      if (c < best_cost) {
        best_cost = c;
        best_idx = cursor;
      }
      Eigen::Index d = 0;
      for (; d < n; ++d) {
        if (++cursor[d] <= window_hi[d]) break;
        cursor[d] = window_lo[d];
      }
      if (d == n) break;
    }

    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = axes[i].value(best_idx[i]);
    return out;
  };

  std::vector<int> cand_idx(static_cast<std::size_t>(n), 0);
  Vector candidate(n);
  Vector best_candidate(n);
  double best_mismatch = std::numeric_limits<double>::infinity();
  while (true) {
    set_from_indices(cand_idx, candidate);
    const Vector reaction = game.best_response_checked(candidate);
    const Vector replied = inner_argmin(cand_idx, reaction);
    const double mismatch = (candidate - replied).norm();
    if (mismatch < best_mismatch) {
      best_mismatch = mismatch;
      best_candidate = candidate;
    }
    Eigen::Index d = 0;
    for (; d < n; ++d) {
      if (++cand_idx[d] < g) break;
      cand_idx[d] = 0;
    }
    if (d == n) break;
  }

  return {best_candidate, game.best_response_checked(best_candidate)};
}

}  // namespace asymgame
