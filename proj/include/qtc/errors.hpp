#pragma once

#include <stdexcept>
#include <string>

namespace qtc {

/// Invalid parameters or configuration (bad potential parameters, empty
/// energy grids, unknown method tags, ...).
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-convergence, overflow, invalid state).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested energy lies above the barrier: no classical turning points.
struct no_turning_points : numerical_error {
  using numerical_error::numerical_error;
};

/// E - V(x) fell below the guard threshold where a propagating wave or a
/// WKB expansion was required.
struct turning_point_error : numerical_error {
  using numerical_error::numerical_error;
};

}  // namespace qtc
