#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

/// Raised when inputs violate an operation's preconditions.
class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a bit stream does not parse under the expected grammar.
class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact enumeration would exceed its configured guard.
class guard_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by iterative numerical procedures that fail to meet tolerance.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace mslab
