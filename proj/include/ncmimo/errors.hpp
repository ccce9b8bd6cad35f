#pragma once

#include <stdexcept>
#include <string>

namespace ncmimo {

/// Invalid scheme parameters or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a non-finite or otherwise unusable intermediate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request exceeds what the implementation supports (sizes, derivative orders).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncmimo
