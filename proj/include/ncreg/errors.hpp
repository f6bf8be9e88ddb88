#pragma once

#include <stdexcept>
#include <string>

namespace ncreg {

// Invalid regularizer or solver parameters (lambda <= 0, q outside (0,1), ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation not defined for this regularizer kind (e.g. inverse of MCP).
struct UnsupportedKindError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values encountered during iteration.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, int sweep)
      : std::runtime_error(what + " (sweep " + std::to_string(sweep) + ")"), sweep(sweep) {}
  int sweep;
};

// A required input (noise vector / ground truth) is missing.
struct InsufficientDataError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ncreg
