#pragma once

// Closed-form scalar functions of the resonant damped Jaynes-Cummings model:
// the decay rate gamma(t) and the amplitude factor b_t, with
//
//   d^2 = lambda^2 - 2 gamma0 lambda.
//
// Both are evaluated through kernels that are entire in d^2, so one code path
// covers the hyperbolic regime (gamma0 < lambda/2), the critical point, and
// the trigonometric regime (gamma0 > lambda/2) continuously.  Near d = 0 the
// kernels switch to a short series to avoid 0/0.

#include <cmath>
#include <optional>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

namespace detail {

// Series cutoff: |d^2| s^2 below this uses the expansion (|d| t < 1e-4).
inline constexpr double jc_series_cut = 1e-8;

/// cosh(sqrt(u) s) continued to u < 0 (= cos(sqrt(-u) s)).
inline double jc_ch(double u, double s) {
  const double w = u * s * s;
  if (std::abs(w) < jc_series_cut)
    return 1.0 + w * (1.0 / 2.0 + w * (1.0 / 24.0 + w / 720.0));
  if (u > 0.0) return std::cosh(std::sqrt(u) * s);
  return std::cos(std::sqrt(-u) * s);
}

/// sinh(sqrt(u) s)/sqrt(u) continued to u < 0 (= sin(sqrt(-u) s)/sqrt(-u)).
inline double jc_shc(double u, double s) {
  const double w = u * s * s;
  if (std::abs(w) < jc_series_cut)
    return s * (1.0 + w * (1.0 / 6.0 + w * (1.0 / 120.0 + w / 5040.0)));
  if (u > 0.0) {
    const double d = std::sqrt(u);
    return std::sinh(d * s) / d;
  }
  const double d = std::sqrt(-u);
  return std::sin(d * s) / d;
}

inline void jc_check_args(double t, double gamma0, double lambda) {
  if (t < 0.0) throw Error("time must be nonnegative");
  if (!(gamma0 > 0.0) || !(lambda > 0.0))
    throw ConfigError("Jaynes-Cummings parameters require gamma0 > 0 and lambda > 0");
}

}  // namespace detail

inline double jc_critical_gamma0(double lambda) { return 0.5 * lambda; }

/// b_t = e^{-lambda t/2} (cosh(dt/2) + (lambda/d) sinh(dt/2)).
inline double jc_b(double t, double gamma0, double lambda) {
  detail::jc_check_args(t, gamma0, lambda);
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  const double s = 0.5 * t;
  return std::exp(-0.5 * lambda * t) *
         (detail::jc_ch(u, s) + lambda * detail::jc_shc(u, s));
}

/// db/dt = -gamma0 lambda e^{-lambda t/2} sinh(dt/2)/d; entire in t, no poles.
inline double jc_b_dot(double t, double gamma0, double lambda) {
  detail::jc_check_args(t, gamma0, lambda);
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  return -gamma0 * lambda * std::exp(-0.5 * lambda * t) * detail::jc_shc(u, 0.5 * t);
}

/// gamma(t) = 2 gamma0 lambda sinh(dt/2) / (d cosh(dt/2) + lambda sinh(dt/2)).
/// At the poles of the trigonometric regime (where b_t = 0) the IEEE quotient
/// is returned, i.e. a signed infinity rather than a crash; propagation must
/// follow the b_t form across those times.
inline double jc_rate(double t, double gamma0, double lambda) {
  detail::jc_check_args(t, gamma0, lambda);
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  const double s = 0.5 * t;
  const double shc = detail::jc_shc(u, s);
  return 2.0 * gamma0 * lambda * shc / (detail::jc_ch(u, s) + lambda * shc);
}

/// Zeros of b_t in (0, t_max], present only for gamma0 > lambda/2:
/// tan(|d| t/2) = -|d|/lambda.
inline std::vector<double> jc_b_zeros(double gamma0, double lambda, double t_max) {
  detail::jc_check_args(0.0, gamma0, lambda);
  std::vector<double> zeros;
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  if (u >= 0.0) return zeros;
  const double d = std::sqrt(-u);
  const double psi = std::atan(d / lambda);  // in (0, pi/2)
  const double pi = 3.14159265358979323846;
  for (int k = 1;; ++k) {
    const double t = 2.0 * (k * pi - psi) / d;
    if (t > t_max) break;
    zeros.push_back(t);
  }
  return zeros;
}

/// Interior stationary points of b_t (db/dt = 0) in (0, t_max], trigonometric
/// regime only: |d| t/2 = k pi.
inline std::vector<double> jc_b_extrema(double gamma0, double lambda, double t_max) {
  detail::jc_check_args(0.0, gamma0, lambda);
  std::vector<double> ext;
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  if (u >= 0.0) return ext;
  const double d = std::sqrt(-u);
  const double pi = 3.14159265358979323846;
  for (int k = 1;; ++k) {
    const double t = 2.0 * k * pi / d;
    if (t > t_max) break;
    ext.push_back(t);
  }
  return ext;
}

/// Smallest positive zero of b_t, if any exists.
inline std::optional<double> jc_first_b_zero(double gamma0, double lambda) {
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  if (u >= 0.0) return std::nullopt;
  const double d = std::sqrt(-u);
  const double pi = 3.14159265358979323846;
  return 2.0 * (pi - std::atan(d / lambda)) / d;
}

}  // namespace qsl
