#pragma once

#include <stdexcept>
#include <string>

namespace drivencft {

// Bad user-supplied values (non-finite durations, non-positive lengths, ...).
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a documented capacity bound (e.g. sequence order too large).
struct CapacityError : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

// A matrix is of the wrong dynamical class for the requested operation
// (e.g. asking for an elliptic logarithm of a hyperbolic matrix).
struct ClassError : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

// Degenerate input that defeats a construction (defective or triangular
// matrices handed to the reducibility transform).
struct DegenerateInput : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

// Runtime numerical failure: overflow, non-finite intermediate, failed solve.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The entropy formula hit a degenerate product (log of zero).
struct SingularConfiguration : NumericError {
  using NumericError::NumericError;
};

// Malformed configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace drivencft
