#pragma once

#include <stdexcept>
#include <string>

namespace kinkspec {

/// Input outside an operation's precondition (bad gamma, epsilon too large,
/// CFL violation, malformed config). Maps to CLI exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced non-finite values.
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinkspec
