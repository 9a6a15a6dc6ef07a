#pragma once

#include <stdexcept>
#include <string>

namespace cavmag {

/// Bad argument to a library function (negative occupation, empty mode set, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unknown key, malformed value or inconsistent parameters in a config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on an input that violates its precondition
/// (unstable drift matrix, unphysical covariance matrix, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested quantity is undefined for the given parameters.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cavmag
