#pragma once

#include <stdexcept>
#include <string>

namespace gausstele {

enum class ErrorCode {
  negative_parameter,
  non_positive_variance,
  not_positive_definite,
  non_finite_input,
  degenerate_time,
  zero_threshold,
  infinite_threshold,
  no_sign_change,
  not_converged,
};

const char* to_string(ErrorCode code) noexcept;

/// Base for every error raised by the library. Carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An argument lies outside the domain of the requested closed form.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine (quadrature, ODE, root finding) failed to reach its target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double estimate, double error_bound);
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

namespace detail {
void require_not_nan(double value, const char* name);
void require_non_negative(double value, const char* name);
void require_positive(double value, const char* name);
}  // namespace detail

}  // namespace gausstele
