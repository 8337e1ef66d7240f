#pragma once

#include <stdexcept>
#include <string>

namespace tricomp {

// Bad input: fractions off the simplex, unsupported loads, malformed configs.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A solver or algorithm failed on valid input.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tricomp
