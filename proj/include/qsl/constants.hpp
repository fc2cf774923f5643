#pragma once

// All tolerances used across the library, in one place.

namespace qsl::tol {

/// Construction-time checks on states and operators (hermiticity, trace).
inline constexpr double construction = 1e-12;

/// Agreement required between two algebraic routes to the same quantity.
inline constexpr double cross_check = 1e-12;

/// Positive-semidefiniteness slack on construction.  Looser than the other
/// construction checks so that Bloch vectors carrying integration drift up to
/// `drift` still convert to valid states.
inline constexpr double psd = 1e-9;

/// Accepted drift of physical invariants along integrated trajectories.
inline constexpr double drift = 1e-9;

/// Hard limit on trajectory drift; propagation aborts beyond this.
inline constexpr double drift_hard = 1e-6;

/// Richardson error gate for the fixed-step integrator.
inline constexpr double step_gate = 1e-7;

/// Dead band for derivative sign tests on sampled curves.
inline constexpr double deadband = 1e-10;

/// Time resolution of extremum and root bisection.
inline constexpr double time_bisect = 1e-10;

/// Absolute tolerance of the adaptive rate quadrature.
inline constexpr double rate_quad = 1e-10;

/// Thresholds on |c1| and c2 in the optimal-evolution conditions.
inline constexpr double optimality = 1e-10;

/// Ratio threshold for flagging an initial state as QSL-optimal.
inline constexpr double ratio_flag = 1e-6;

}  // namespace qsl::tol
