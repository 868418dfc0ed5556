#pragma once

#include <stdexcept>
#include <string>

namespace rbfmix {

/// Invalid or inconsistent user input (presets, parameters, config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or failed to factorize.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symmetric positive definite factorization broke down (e.g. r >> h_X).
class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rbfmix
