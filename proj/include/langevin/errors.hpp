#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace langevin {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument shapes don't line up (e.g. point dimension vs potential dimension).
struct DimensionError : Error {
  using Error::Error;
};

// A constructor or operation was given parameters outside its admissible range.
struct InvalidParameterError : Error {
  using Error::Error;
};

// Scalar argument outside the mathematical domain of the function.
struct DomainError : Error {
  using Error::Error;
};

// Stepsize too large for the declared smoothness: the chain is transient.
struct TransienceError : InvalidParameterError {
  using InvalidParameterError::InvalidParameterError;
};

// A requested theoretical quantity doesn't exist for the given inputs
// (e.g. sub-Gaussian envelope with c >= 1, envelope from a degenerate fit).
struct UnavailableError : Error {
  using Error::Error;
};

// Automatic burn-in needs strong convexity; caller must choose burn_in.
struct BurnInUnavailableError : UnavailableError {
  using UnavailableError::UnavailableError;
};

// The requested check does not apply to the supplied inputs
// (wrong potential kind, wrong dimension, correlated records, ...).
struct InapplicableError : Error {
  using Error::Error;
};

// Super-linear growth fit produced a non-positive slope.
struct FitFailureError : Error {
  using Error::Error;
};

// A grid search exhausted its range without certifying the target property.
struct SearchRangeError : Error {
  using Error::Error;
};

// A chain state became non-finite. Reported for the lowest-index chain hit.
struct DivergenceError : Error {
  std::int64_t chain;
  std::int64_t iteration;
  DivergenceError(std::int64_t chain_, std::int64_t iteration_, const std::string& what_)
      : Error(what_), chain(chain_), iteration(iteration_) {}
};

// Malformed or inconsistent run configuration (CLI layer).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace langevin
