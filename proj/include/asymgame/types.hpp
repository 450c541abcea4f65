#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace asymgame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Error categories surfaced to callers (and mapped to CLI exit codes).
enum class errc {
  dimension_mismatch,
  invalid_argument,
  non_finite,
  oracle_out_of_range,
  no_convergence,
  rate_condition_violated,
  unsupported,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Throws Error{non_finite} if v contains NaN or Inf entries.
void ensure_finite(const Vector& v, const std::string& context);

/// Throws Error{non_finite} if x is NaN or Inf.
void ensure_finite(double x, const std::string& context);

/// Throws Error{dimension_mismatch} unless a and b have equal length.
void ensure_same_dim(const Vector& a, const Vector& b, const std::string& context);

}  // namespace asymgame
