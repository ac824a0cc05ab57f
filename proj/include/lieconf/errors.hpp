#pragma once

#include <stdexcept>
#include <string>

namespace lieconf {

/// Bad user input: malformed algebra/weight specs, non-dominant weights,
/// configurations outside the regular set. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// SVD non-convergence and similar floating point breakdowns (exit code 4).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction invariant was violated; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lieconf
