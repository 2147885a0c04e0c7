#pragma once

#include <stdexcept>
#include <string>

namespace oureflect {

// Precondition violated by a caller-supplied argument (dimension mismatch,
// bad index, malformed input).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iteration failed to converge, overflow, or an oracle residual check failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// State space, event count or acceptance rate beyond configured limits.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph, path or config file. Carries the location in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oureflect
