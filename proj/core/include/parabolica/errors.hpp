#pragma once

#include <stdexcept>
#include <string>

namespace parabolica {

/// Argument outside the mathematical domain of an operation
/// (collision configuration, zero vector, negative time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input: dimension mismatch, invalid masses, bad options.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical solver failed to bracket or converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parabolica
