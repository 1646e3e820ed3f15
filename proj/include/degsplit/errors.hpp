#pragma once

#include <stdexcept>
#include <string>

namespace degsplit {

/// Bad argument values or unsupported parameter combinations.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Structural precondition on the input graph/artifact not met.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An algorithm-internal invariant failed; message carries a witness.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A produced artifact does not cover every edge / node it must.
struct IncompleteAssignment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration or retry budget was exhausted.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An augmenting path no longer matches the current coloring/orientation.
struct StalePath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace degsplit
