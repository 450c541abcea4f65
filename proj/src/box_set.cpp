#include "asymgame/box_set.hpp"

#include <sstream>

namespace asymgame {

BoxSet::BoxSet(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  ensure_same_dim(lower_, upper_, "BoxSet");
  if (lower_.size() == 0) {
    throw Error(errc::invalid_argument, "BoxSet: dimension must be positive");
  }
  ensure_finite(lower_, "BoxSet lower bound");
  ensure_finite(upper_, "BoxSet upper bound");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (lower_[i] > upper_[i]) {
      std::ostringstream msg;
      msg << "BoxSet: lower[" << i << "]=" << lower_[i] << " exceeds upper[" << i
          << "]=" << upper_[i];
      throw Error(errc::invalid_argument, msg.str());
    }
  }
}

BoxSet BoxSet::cube(Eigen::Index dim, double lo, double hi) {
  return BoxSet(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

Vector BoxSet::project(const Vector& point) const {
  ensure_same_dim(point, lower_, "BoxSet::project");
  ensure_finite(point, "BoxSet::project input");
  return point.cwiseMax(lower_).cwiseMin(upper_);
}

bool BoxSet::contains(const Vector& point, double tol) const {
  ensure_same_dim(point, lower_, "BoxSet::contains");
  if (tol < 0.0) {
    throw Error(errc::invalid_argument, "BoxSet::contains: tolerance must be nonnegative");
  }
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    if (!(point[i] >= lower_[i] - tol && point[i] <= upper_[i] + tol)) return false;
  }
  return true;
}

Vector BoxSet::sample_uniform(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    out[i] = lower_[i] + (upper_[i] - lower_[i]) * unit(rng);
  }
  return out;
}

}  // namespace asymgame
