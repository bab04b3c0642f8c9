#pragma once

#include <stdexcept>
#include <string>

namespace ppbell {

/// Invalid run or module configuration. Raised before any compute starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A NaN or Inf appeared in a phase-space coordinate.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The rejection sampler exceeded its iteration budget.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty ensembles, too few batches for an error estimate.
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio denominator is not resolved above its own sampling error.
class UnstableDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ppbell
