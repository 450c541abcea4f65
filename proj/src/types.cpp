#include "asymgame/types.hpp"

#include <cmath>
#include <sstream>

namespace asymgame {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::invalid_argument: return "invalid_argument";
    case errc::non_finite: return "non_finite";
    case errc::oracle_out_of_range: return "oracle_out_of_range";
    case errc::no_convergence: return "no_convergence";
    case errc::rate_condition_violated: return "rate_condition_violated";
    case errc::unsupported: return "unsupported";
  }
  return "unknown";
}

void ensure_finite(const Vector& v, const std::string& context) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << context << ": vector has non-finite entries";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) {
        msg << " (first at index " << i << ")";
        break;
      }
    }
    throw Error(errc::non_finite, msg.str());
  }
}

void ensure_finite(double x, const std::string& context) {
  if (!std::isfinite(x)) {
    throw Error(errc::non_finite, context + ": value is non-finite");
  }
}

void ensure_same_dim(const Vector& a, const Vector& b, const std::string& context) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << context << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw Error(errc::dimension_mismatch, msg.str());
  }
}

}  // namespace asymgame
