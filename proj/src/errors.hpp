#pragma once

#include <stdexcept>
#include <string>

namespace hotvbl {

// Shapes that do not fit together (order vs size, matrix vs vector lengths).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Values that are out of their admissible range (levels, tolerances, k, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failures that survive jitter escalation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A self-check failed; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hotvbl
