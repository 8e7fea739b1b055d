#pragma once

#include <stdexcept>
#include <string>

namespace simplex_gibbs {

// Invalid argument to a public operation (bad dimension, index, state).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition that only surfaces mid-computation, e.g. a
// negative remainder density in the mixture coupling.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A replayed record disagrees with what its seed material reproduces.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coupling from the past ran out of epoch doublings.
class TerminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplex_gibbs
