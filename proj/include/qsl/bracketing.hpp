#pragma once

// Extremum and root location for scalar curves sampled on a monotone grid
// with a dense evaluator.  Positive-part integrals of d/dt f are computed by
// bracketing the extrema of f and telescoping the refined values, never by
// clipping the integrand on the grid: clipping biases the result near sign
// changes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "qsl/constants.hpp"
#include "qsl/errors.hpp"

namespace qsl {

/// A scalar curve f(t): samples on a strictly increasing grid plus a dense
/// evaluator that agrees with the samples at the nodes.
struct SampledCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::function<double(double)> dense;

  double t_front() const { return times.front(); }
  double t_back() const { return times.back(); }
};

/// Build a curve from a grid and a dense evaluator.
inline SampledCurve make_curve(std::vector<double> times,
                               std::function<double(double)> dense) {
  if (times.size() < 2) throw Error("curve needs at least two grid points");
  SampledCurve c;
  c.values.reserve(times.size());
  for (double t : times) c.values.push_back(dense(t));
  c.times = std::move(times);
  c.dense = std::move(dense);
  return c;
}

/// Build a curve from samples only; the dense evaluator is a cubic Hermite
/// interpolant with finite-difference slopes.
inline SampledCurve make_curve(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2)
    throw Error("curve needs matching times/values with >= 2 entries");
  auto ts = std::make_shared<std::vector<double>>(times);
  auto vs = std::make_shared<std::vector<double>>(values);
  auto dense = [ts, vs](double t) -> double {
    const auto& T = *ts;
    const auto& V = *vs;
    if (t <= T.front()) return V.front();
    if (t >= T.back()) return V.back();
    auto it = std::upper_bound(T.begin(), T.end(), t);
    std::size_t i = static_cast<std::size_t>(it - T.begin()) - 1;
    const double h = T[i + 1] - T[i];
    // one-sided slopes at the segment ends
    const double m0 = (i == 0) ? (V[1] - V[0]) / (T[1] - T[0])
                               : (V[i + 1] - V[i - 1]) / (T[i + 1] - T[i - 1]);
    const double m1 = (i + 2 == T.size())
                          ? (V[i + 1] - V[i]) / h
                          : (V[i + 2] - V[i]) / (T[i + 2] - T[i]);
    const double s = (t - T[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * V[i] + (s3 - 2 * s2 + s) * h * m0 +
           (-2 * s3 + 3 * s2) * V[i + 1] + (s3 - s2) * h * m1;
  };
  SampledCurve c;
  c.times = std::move(times);
  c.values = std::move(values);
  c.dense = std::move(dense);
  return c;
}

namespace detail {

/// Sign of a sampled slope with the derivative dead band scaled to a
/// per-step difference.
inline int slope_sign(double dv, double dt) {
  const double band = tol::deadband * dt;
  if (dv > band) return 1;
  if (dv < -band) return -1;
  return 0;
}

/// Refine the time of a slope sign change inside (lo, hi) by interval
/// halving; the probe width shrinks with the bracket.
inline double refine_extremum(const std::function<double(double)>& f, double lo,
                              double hi, int left_sign, double time_tol) {
  while (hi - lo > time_tol) {
    const double mid = 0.5 * (lo + hi);
    const double w = std::max(0.125 * (hi - lo), 1e-13);
    const double dv = f(std::min(mid + w, hi)) - f(std::max(mid - w, lo));
    const int s = (dv > 0.0) ? 1 : (dv < 0.0 ? -1 : 0);
    if (s == 0 || s != left_sign)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Interior extrema of the curve on [times.front(), t_end], located to
/// time_tol.  t_end may fall between grid nodes.
inline std::vector<double> locate_extrema(const SampledCurve& c, double t_end,
                                          double time_tol = tol::time_bisect) {
  std::vector<double> out;
  const auto& T = c.times;
  const auto& V = c.values;
  // index of the last node strictly below t_end
  std::size_t last = 0;
  while (last + 1 < T.size() && T[last + 1] < t_end) ++last;

  int prev_sign = 0;
  double prev_t = T.front();
  for (std::size_t i = 0; i <= last; ++i) {
    const double t1 = (i == last) ? std::min(t_end, T[i + 1]) : T[i + 1];
    if (t1 <= T[i]) break;
    const double v1 = (t1 == T[i + 1]) ? V[i + 1] : c.dense(t1);
    const int s = detail::slope_sign(v1 - V[i], t1 - T[i]);
    if (s != 0) {
      if (prev_sign != 0 && s != prev_sign) {
        const double e =
            detail::refine_extremum(c.dense, prev_t, t1, prev_sign, time_tol);
        out.push_back(e);
      }
      prev_sign = s;
      prev_t = T[i];
    }
  }
  return out;
}

struct VariationResult {
  double positive{};  // sum of rises of f
  double negative{};  // sum of falls of f
  double total{};     // total variation
  std::vector<double> extrema;
};

/// Positive/negative/total variation of the curve over [start, t_end],
/// telescoped over the refined extrema.
inline VariationResult variation(const SampledCurve& c, double t_end) {
  if (t_end < c.t_front()) throw Error("variation interval ends before the curve starts");
  t_end = std::min(t_end, c.t_back());
  VariationResult r;
  r.extrema = locate_extrema(c, t_end);
  double prev = c.values.front();
  auto accumulate = [&](double v) {
    const double d = v - prev;
    if (d > 0.0)
      r.positive += d;
    else
      r.negative -= d;
    prev = v;
  };
  for (double e : r.extrema) accumulate(c.dense(e));
  accumulate(c.dense(t_end));
  r.total = r.positive + r.negative;
  return r;
}

/// Zeros of the curve on [times.front(), t_end]: sign changes refined by
/// bisection, plus tangential zeros (extrema with |f| <= value_tol).
inline std::vector<double> locate_zeros(const SampledCurve& c, double t_end,
                                        double value_tol = 1e-9,
                                        double time_tol = tol::time_bisect) {
  std::vector<double> out;
  const auto& T = c.times;
  const auto& V = c.values;
  std::size_t last = 0;
  while (last + 1 < T.size() && T[last + 1] < t_end) ++last;

  for (std::size_t i = 0; i <= last; ++i) {
    double lo = T[i], hi = (i == last) ? std::min(t_end, T[i + 1]) : T[i + 1];
    if (hi <= lo) break;
    double flo = V[i];
    double fhi = (hi == T[i + 1]) ? V[i + 1] : c.dense(hi);
    if (flo == 0.0) {
      if (out.empty() || std::abs(out.back() - lo) > 1e-8) out.push_back(lo);
      continue;
    }
    if (flo * fhi < 0.0) {
      while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = c.dense(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
  }
  // tangential zeros sit at extrema that touch the axis
  for (double e : locate_extrema(c, t_end, time_tol)) {
    if (std::abs(c.dense(e)) <= value_tol) {
      bool dup = false;
      for (double z : out) dup = dup || std::abs(z - e) < 1e-8;
      if (!dup) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qsl
