#pragma once

// Scalar quadrature: adaptive Simpson with an absolute tolerance, and a
// memoized cumulative integral for rate functions that are integrated again
// and again on monotone time grids.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "qsl/constants.hpp"
#include "qsl/errors.hpp"

namespace qsl {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

/// Simpson on a single panel with one midpoint evaluation.
template <class F>
double simpson_panel(const F& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

/// Memoized cumulative integral G(t) = int_0^t f, for t >= 0.  Repeated
/// evaluations on a monotone grid cost one adaptive pass per increment.
/// Thread-safe; the cache is guarded.
class CumulativeIntegral {
 public:
  explicit CumulativeIntegral(std::function<double(double)> f,
                              double abs_tol = tol::rate_quad)
      : f_(std::move(f)), tol_(abs_tol) {}

  double operator()(double t) const {
    if (t < 0.0) throw Error("cumulative integral requested at negative time");
    if (t == 0.0) return 0.0;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.upper_bound(t);
    double t0 = 0.0, g0 = 0.0;
    if (it != cache_.begin()) {
      --it;
      t0 = it->first;
      g0 = it->second;
      if (t0 == t) return g0;
    }
    const double g = g0 + adaptive_simpson(f_, t0, t, tol_);
    cache_.emplace(t, g);
    return g;
  }

 private:
  std::function<double(double)> f_;
  double tol_;
  mutable std::map<double, double> cache_;
  mutable std::mutex mu_;
};

}  // namespace qsl
