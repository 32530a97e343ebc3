#pragma once

#include <stdexcept>
#include <string>

namespace rcr {

// Invalid scenario, constellation or solver configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed runtime input: non-finite samples, mismatched dimensions, a
// symbol that is not part of the alphabet.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcr
