#pragma once

#include <stdexcept>
#include <string>

namespace socil {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape or index disagreement between caller data and a problem definition.
struct DimensionError : Error {
  using Error::Error;
};

/// A function handle returned a non-finite value or was evaluated outside
/// its validity box. The message carries the time/constraint index.
struct EvaluationError : Error {
  using Error::Error;
};

/// Invalid configuration value (non-positive barrier weight, zero bound, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// Trajectory optimization failed in a way the caller cannot recover from
/// (divergent rollout, unbounded regularization).
struct SolverError : Error {
  using Error::Error;
};

/// A matrix required to be invertible was numerically singular.
struct SingularityError : Error {
  using Error::Error;
};

/// Filesystem failure during export; message names the path.
struct IoError : Error {
  using Error::Error;
};

}  // namespace socil
