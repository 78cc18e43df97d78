#pragma once

#include <stdexcept>
#include <string>

namespace enrel {

// Argument outside the mathematical domain of an operation (negative energy,
// delta >= 1/2, eps > eps0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Violated precondition that is not a numeric domain issue (k >= n for the
// function-agnostic bound, size caps, mismatched dimensions).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace enrel
