#pragma once

#include <stdexcept>
#include <string>

namespace cheb2d {

/// Raised when a caller violates an operation's precondition (bad degree,
/// out-of-range index, non-positive threshold, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a target function or partial produces an unusable value
/// (non-finite sample, division by zero) at a specific point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

}  // namespace cheb2d
