#pragma once

#include "asymgame/types.hpp"

#include <random>

namespace asymgame {

/// Axis-aligned compact box {x : lower <= x <= upper} with exact Euclidean
/// projection. Bounds must be finite and ordered componentwise; immutable
/// after construction.
class BoxSet {
 public:
  BoxSet(Vector lower, Vector upper);

  /// Cube [lo, hi]^dim.
  static BoxSet cube(Eigen::Index dim, double lo, double hi);

  Eigen::Index dim() const noexcept { return lower_.size(); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  /// Componentwise clip; the unique Euclidean-nearest feasible point.
  Vector project(const Vector& point) const;

  /// True iff lower[i] - tol <= point[i] <= upper[i] + tol for all i.
  bool contains(const Vector& point, double tol = 0.0) const;

  /// Uniform sample from the box (used for seeded initializations).
  Vector sample_uniform(std::mt19937_64& rng) const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace asymgame
