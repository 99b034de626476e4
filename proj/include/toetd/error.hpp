#pragma once

#include <stdexcept>
#include <string>

namespace toetd {

// Rejected argument: wrong dimension, non-finite value, or out-of-range scalar.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The linear system for the true values has no unique solution.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, unknown names, or unwritable output.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toetd
