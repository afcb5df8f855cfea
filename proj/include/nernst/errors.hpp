#pragma once

#include <stdexcept>
#include <string>

namespace nernst {

// Argument outside the physical domain of a model (T <= 0, Z out of bounds,
// super-extremal black hole, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input: bad grids, unknown states, inconsistent tables.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical kernel could not deliver its contract (no bracket, non-finite
// evaluation, truncation not reached).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a zero-temperature quantity is requested from a table whose
// T=0 row contains a divergent entry.
class ContinuityFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nernst
