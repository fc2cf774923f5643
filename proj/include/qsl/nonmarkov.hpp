#pragma once

// Trace-distance (BLP) non-Markovianity: positive-part integration of
// d/dt D(t) for a fixed pair, maximization over antipodal pure pairs on a
// Fibonacci sphere grid, the closed-form value for the damped
// Jaynes-Cummings model, and the phase-covariant rate criterion with its
// region boundaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "qsl/bracketing.hpp"
#include "qsl/distance.hpp"
#include "qsl/generator.hpp"
#include "qsl/parallel.hpp"
#include "qsl/propagation.hpp"

namespace qsl {

enum class BLPMethod { analytic, fixed_pair, pair_search };

struct BLPResult {
  double value{};
  BlochVector r1{}, r2{};
  BLPMethod method{};
};

struct BLPOptions {
  int resolution = 144;       // Fibonacci directions in the coarse pass
  int refine_levels = 2;      // local refinement rounds around the best cell
  int refine_factor = 4;      // extent shrink per round
  bool general_pairs = false; // falsification tool: search non-antipodal pairs
  unsigned threads = 1;
  double steps_per_unit = 2048.0;
};

/// Positive part of int_0^tau (d/dt) D(t) dt for one fixed pair of initial
/// states, with the extrema of D located by bracketing and bisection.
inline double blp_pair(const GeneratorSpec& spec, const BlochVector& r1,
                       const BlochVector& r2, double tau, std::size_t steps) {
  if ((r1 - r2).norm() <= 1e-12)
    throw Error("trace-distance pair must consist of distinct states");
  const Trajectory t1 = propagate(spec, bloch_to_density(r1), tau, steps);
  const Trajectory t2 = propagate(spec, bloch_to_density(r2), tau, steps);
  const auto& T = t1.times();
  std::vector<double> d(T.size());
  for (std::size_t i = 0; i < T.size(); ++i)
    d[i] = trace_distance(t1.state(i), t2.state(i));
  SampledCurve c;
  c.times = T;
  c.values = std::move(d);
  c.dense = [t1, t2](double t) {
    return trace_distance(t1.state_at(t), t2.state_at(t));
  };
  return variation(c, tau).positive;
}

inline double blp_pair(const GeneratorSpec& spec, const BlochVector& r1,
                       const BlochVector& r2, double tau) {
  return blp_pair(spec, r1, r2, tau, default_steps(tau));
}

namespace detail {

inline std::vector<BlochVector> fibonacci_sphere(int n) {
  std::vector<BlochVector> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  const double ga = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * i;
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

inline BlochVector normalized(const BlochVector& v) {
  const double n = v.norm();
  return {v.x / n, v.y / n, v.z / n};
}

inline std::pair<BlochVector, BlochVector> tangent_basis(const BlochVector& n) {
  const BlochVector ref = std::abs(n.z) < 0.9 ? BlochVector{0, 0, 1}
                                              : BlochVector{1, 0, 0};
  // u = n x ref, normalized; v = n x u
  BlochVector u{n.y * ref.z - n.z * ref.y, n.z * ref.x - n.x * ref.z,
                n.x * ref.y - n.y * ref.x};
  u = normalized(u);
  BlochVector v{n.y * u.z - n.z * u.y, n.z * u.x - n.x * u.z,
                n.x * u.y - n.y * u.x};
  return {u, v};
}

}  // namespace detail

/// Maximize blp_pair over antipodal pure-state pairs +-n, n drawn from a
/// deterministic Fibonacci sphere grid, then polish the best cell by local
/// tangent-plane refinement.  The result does not depend on scheduling.
inline BLPResult blp_measure(const GeneratorSpec& spec, double tau,
                             const BLPOptions& opts = {}) {
  if (!(tau > 0.0)) throw Error("blp_measure requires tau > 0");
  const std::size_t steps = default_steps(tau, opts.steps_per_unit);

  if (opts.general_pairs) {
    // Coarse full-pair search over distinct grid directions; no refinement.
    const auto dirs = detail::fibonacci_sphere(std::min(opts.resolution, 48));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j) pairs.emplace_back(i, j);
    std::vector<double> vals(pairs.size());
    parallel_for(pairs.size(), opts.threads, [&](std::size_t k) {
      vals[k] = blp_pair(spec, dirs[pairs[k].first], dirs[pairs[k].second], tau, steps);
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < vals.size(); ++k)
      if (vals[k] > vals[best]) best = k;
    return {vals[best], dirs[pairs[best].first], dirs[pairs[best].second],
            BLPMethod::pair_search};
  }

  auto eval_dir = [&](const BlochVector& n) {
    return blp_pair(spec, n, -n, tau, steps);
  };

  // the coordinate axes join the Fibonacci grid: every shipped family has a
  // diagonal deformation, so its exact optimum sits on an axis
  auto dirs = detail::fibonacci_sphere(opts.resolution);
  dirs.push_back({1, 0, 0});
  dirs.push_back({0, 1, 0});
  dirs.push_back({0, 0, 1});
  std::vector<double> vals(dirs.size());
  parallel_for(dirs.size(), opts.threads,
               [&](std::size_t i) { vals[i] = eval_dir(dirs[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  BlochVector best_dir = dirs[best];
  double best_val = vals[best];

  double extent = 2.0 / std::sqrt(static_cast<double>(opts.resolution));
  for (int level = 0; level < opts.refine_levels; ++level) {
    const auto [u, v] = detail::tangent_basis(best_dir);
    std::vector<BlochVector> cand;
    for (int iu = -2; iu <= 2; ++iu)
      for (int iv = -2; iv <= 2; ++iv) {
        if (iu == 0 && iv == 0) continue;
        const double au = extent * iu / 2.0, av = extent * iv / 2.0;
        cand.push_back(detail::normalized(
            {best_dir.x + au * u.x + av * v.x, best_dir.y + au * u.y + av * v.y,
             best_dir.z + au * u.z + av * v.z}));
      }
    std::vector<double> cvals(cand.size());
    parallel_for(cand.size(), opts.threads,
                 [&](std::size_t i) { cvals[i] = eval_dir(cand[i]); });
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (cvals[i] > best_val) {
        best_val = cvals[i];
        best_dir = cand[i];
      }
    extent /= opts.refine_factor;
  }
  return {best_val, best_dir, -best_dir, BLPMethod::pair_search};
}

/// Closed-form backflow of the damped Jaynes-Cummings model on the +-z pair
/// (the pair behind the closed-form ratio expression): the accumulated rises
/// of b_t^2, enumerated from the exact zeros and stationary points of b_t.
/// Zero in the hyperbolic and critical regimes, where b_t^2 decays
/// monotonically.  Note that the full pair-search maximum is attained on the
/// equator instead, where the trace distance is |b_t| >= b_t^2.
inline double blp_jc_analytic(double tau, double gamma0, double lambda) {
  if (tau < 0.0) throw Error("time must be nonnegative");
  const double u = lambda * lambda - 2.0 * gamma0 * lambda;
  if (u >= 0.0 || tau == 0.0) return 0.0;
  const double d = std::sqrt(-u);
  const double pi = 3.14159265358979323846;
  const auto zeros = jc_b_zeros(gamma0, lambda, tau);
  double n = 0.0;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const double t_peak = 2.0 * (k + 1) * pi / d;  // next stationary point
    const double end = std::min(t_peak, tau);
    const double b = jc_b(end, gamma0, lambda);
    n += b * b;  // rise from b^2 = 0 at the zero
  }
  return n;
}

/// BLP value of commutative phase-covariant dynamics from the closed form of
/// the z-deformation g = e^{-Gamma}: rises of g accumulate exactly over the
/// intervals where gamma(t) < 0.  Independent of the propagation machinery.
inline double blp_commutative_pc(double tau, double kappa, const RateFunction& gamma,
                                 std::size_t grid = 4096) {
  if (!(tau > 0.0)) return 0.0;
  std::vector<double> ts(grid + 1);
  for (std::size_t i = 0; i <= grid; ++i)
    ts[i] = tau * static_cast<double>(i) / static_cast<double>(grid);
  auto curve = make_curve(ts, [&gamma](double t) { return gamma(t); });
  const auto zeros = locate_zeros(curve, tau, /*value_tol=*/0.0);
  CumulativeIntegral acc([gamma](double t) { return gamma(t); });
  const auto g_of = [&](double t) {
    return std::exp(-0.5 * (kappa + 1.0) * acc(t));
  };
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), zeros.begin(), zeros.end());
  edges.push_back(tau);
  double n = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (b <= a) continue;
    if (gamma(0.5 * (a + b)) < 0.0) n += g_of(b) - g_of(a);
  }
  return n;
}

/// Signed values of the phase-covariant non-Markovianity boundaries at time
/// t, with gamma' = gamma1 + gamma2:
///   blp_boundary       = gamma' + 4 gamma3   (negative <=> BLP backflow)
///   secondary_boundary = gamma' + 2 gamma3
///   semigroup_boundary = gamma'
struct RegionFlags {
  double blp_boundary{};
  double secondary_boundary{};
  double semigroup_boundary{};
};

inline RegionFlags pc_blp_criterion(const RateSet& rates, double t) {
  const double gp = rates.gamma1(t) + rates.gamma2(t);
  const double g3 = rates.gamma3(t);
  return {gp + 4.0 * g3, gp + 2.0 * g3, gp};
}

struct BoundaryCrossings {
  std::vector<double> blp, secondary, semigroup;
  std::vector<double> all;  // merged, deduplicated, ascending
};

/// Zero crossings of the three boundary functions on (0, t_max], located by
/// bisection; tangential zeros are caught through the extremum pass.
inline BoundaryCrossings region_boundary_crossings(const RateSet& rates,
                                                   double t_max,
                                                   std::size_t grid = 4096) {
  std::vector<double> ts(grid + 1);
  for (std::size_t i = 0; i <= grid; ++i)
    ts[i] = t_max * static_cast<double>(i) / static_cast<double>(grid);
  auto find = [&](auto f) {
    return locate_zeros(make_curve(ts, std::function<double(double)>(f)), t_max);
  };
  BoundaryCrossings bc;
  bc.blp = find([&](double t) { return pc_blp_criterion(rates, t).blp_boundary; });
  bc.secondary =
      find([&](double t) { return pc_blp_criterion(rates, t).secondary_boundary; });
  bc.semigroup =
      find([&](double t) { return pc_blp_criterion(rates, t).semigroup_boundary; });
  std::vector<double> all;
  all.insert(all.end(), bc.blp.begin(), bc.blp.end());
  all.insert(all.end(), bc.secondary.begin(), bc.secondary.end());
  all.insert(all.end(), bc.semigroup.begin(), bc.semigroup.end());
  std::sort(all.begin(), all.end());
  for (double t : all)
    if (bc.all.empty() || t - bc.all.back() > 1e-8) bc.all.push_back(t);
  return bc;
}

/// Rate-sign indicator of broken CP-divisibility: true when any canonical
/// decay rate goes negative at a sampled time in (0, t_max].
inline bool has_negative_rate(const GeneratorSpec& spec, double t_max,
                              std::size_t grid = 1024) {
  auto sample = [&](const std::function<double(double)>& f) {
    for (std::size_t i = 1; i <= grid; ++i) {
      const double t = t_max * static_cast<double>(i) / static_cast<double>(grid);
      if (f(t) < -1e-15) return true;
    }
    return false;
  };
  if (const auto* p = std::get_if<PauliChannel>(&spec)) {
    return sample([&](double t) { return p->rates.gamma1(t); }) ||
           sample([&](double t) { return p->rates.gamma2(t); }) ||
           sample([&](double t) { return p->rates.gamma3(t); });
  }
  if (std::holds_alternative<EternalNM>(spec)) return t_max > 0.0;
  if (const auto* g = std::get_if<GenericLindblad>(&spec)) {
    for (const auto& j : g->jumps)
      if (sample([&](double t) { return j.rate(t); })) return true;
    return false;
  }
  const auto rs = phase_covariant_rates(spec);
  if (!rs) return false;
  return sample([&](double t) { return rs->gamma1(t); }) ||
         sample([&](double t) { return rs->gamma2(t); }) ||
         sample([&](double t) { return rs->gamma3(t); });
}

}  // namespace qsl
