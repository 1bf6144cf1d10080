#pragma once

#include <stdexcept>
#include <string>

namespace mvsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files, manifests or dataset invariants.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Caller passed arguments that break an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvsc
