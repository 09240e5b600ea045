#include "gausstele/error.hpp"

#include <cmath>
#include <sstream>

namespace gausstele {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::negative_parameter: return "negative_parameter";
    case ErrorCode::non_positive_variance: return "non_positive_variance";
    case ErrorCode::not_positive_definite: return "not_positive_definite";
    case ErrorCode::non_finite_input: return "non_finite_input";
    case ErrorCode::degenerate_time: return "degenerate_time";
    case ErrorCode::zero_threshold: return "zero_threshold";
    case ErrorCode::infinite_threshold: return "infinite_threshold";
    case ErrorCode::no_sign_change: return "no_sign_change";
    case ErrorCode::not_converged: return "not_converged";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ConvergenceError::ConvergenceError(const std::string& message, double estimate, double error_bound)
    : Error(ErrorCode::not_converged,
            [&] {
              std::ostringstream os;
              os.precision(6);
              os << message << " (estimate " << estimate << ", error bound " << error_bound << ")";
              return os.str();
            }()),
      estimate_(estimate),
      error_bound_(error_bound) {}

namespace detail {

void require_not_nan(double value, const char* name) {
  if (std::isnan(value)) {
    throw DomainError(ErrorCode::non_finite_input, std::string(name) + " is NaN");
  }
}

void require_non_negative(double value, const char* name) {
  require_not_nan(value, name);
  if (value < 0.0) {
    throw DomainError(ErrorCode::negative_parameter, std::string(name) + " must be >= 0");
  }
}

void require_positive(double value, const char* name) {
  require_not_nan(value, name);
  if (!(value > 0.0)) {
    throw DomainError(ErrorCode::non_positive_variance, std::string(name) + " must be > 0");
  }
}

}  // namespace detail
}  // namespace gausstele
