#pragma once

#include <stdexcept>
#include <string>

namespace thresholdci {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numerical routine fails to meet its tolerance.
/// Carries the best estimate reached and an error bound for it.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace thresholdci
