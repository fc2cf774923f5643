#pragma once

// Conditions for speed-limit-optimal evolution.  For a pure initial state the
// bound is saturated on [0, tau) exactly when, at every time,
//
//   c1 = <psi0| drho/dt |psi0_perp> = 0   and   c2 = <psi0| drho/dt |psi0> <= 0,
//
// and several model families admit closed-form residuals in the initial-state
// population a whose zero sets are the optimal states.  Residuals are
// implemented with their overall positive prefactors stripped; only the zero
// sets matter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "qsl/constants.hpp"
#include "qsl/errors.hpp"
#include "qsl/generator.hpp"
#include "qsl/parallel.hpp"
#include "qsl/propagation.hpp"
#include "qsl/qsl_metrics.hpp"
#include "qsl/state.hpp"

namespace qsl {

struct OptimalityReport {
  cplx c1{};
  double c2{};
  bool satisfied{};
  double t{};
};

/// Evaluate the two conditions at time t along the trajectory started at
/// psi0.  The trajectory must begin at psi0.
inline OptimalityReport optimality_from_trajectory(const Trajectory& traj,
                                                   const PureState& psi0, double t) {
  const Mat2 dm = evaluate_generator(traj.spec(), traj.state_at(t), t);
  const cplx p0 = psi0.amp_excited(), p1 = psi0.amp_ground();
  const cplx q0 = psi0.perp_amp_excited(), q1 = psi0.perp_amp_ground();
  OptimalityReport rep;
  rep.t = t;
  rep.c1 = std::conj(p0) * (dm.m00 * q0 + dm.m01 * q1) +
           std::conj(p1) * (dm.m10 * q0 + dm.m11 * q1);
  rep.c2 = (std::conj(p0) * (dm.m00 * p0 + dm.m01 * p1) +
            std::conj(p1) * (dm.m10 * p0 + dm.m11 * p1))
               .real();
  rep.satisfied = std::abs(rep.c1) <= tol::optimality && rep.c2 <= tol::optimality;
  return rep;
}

inline OptimalityReport optimality_conditions(const GeneratorSpec& spec,
                                              const PureState& psi0, double t,
                                              std::size_t steps) {
  if (t < 0.0) throw Error("optimality conditions require t >= 0");
  const Trajectory traj =
      propagate(spec, psi0.density(), t, std::max<std::size_t>(steps, 16));
  return optimality_from_trajectory(traj, psi0, t);
}

inline OptimalityReport optimality_conditions(const GeneratorSpec& spec,
                                              const PureState& psi0, double t) {
  return optimality_conditions(spec, psi0, t, default_steps(std::max(t, 1e-2)));
}

enum class ResidualFamily { phase_covariant, pauli, eternal_nm, time_dependent };

namespace detail {

inline double constant_or_throw(const RateFunction& f, const char* name) {
  if (!f.is_constant())
    throw ConfigError(std::string("condition residual needs a constant rate: ") + name);
  return f.constant_value();
}

}  // namespace detail

/// Closed-form optimality residual of the given family at population a and
/// time t; zero exactly where the evolution is speed-limit optimal.  Constant
/// rates are required for the phase-covariant and Pauli families; the
/// eternal-NM and oscillatory families have fixed rate shapes.  The
/// oscillatory family only has printed residuals at a in {0, 1/2, 1}.
inline double condition_residual(ResidualFamily family, double a, double t,
                                 const RateSet& rates) {
  if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("population a must lie in [0,1]");
  if (t < 0.0) throw Error("time must be nonnegative");
  switch (family) {
    case ResidualFamily::phase_covariant: {
      const double g1 = detail::constant_or_throw(rates.gamma1, "gamma1");
      const double g2 = detail::constant_or_throw(rates.gamma2, "gamma2");
      const double g3 = detail::constant_or_throw(rates.gamma3, "gamma3");
      return (a - 1.0) * a *
             (-4.0 * std::exp(g3 * t) * ((a - 1.0) * g1 + a * g2) -
              (1.0 - 2.0 * a) * std::exp(0.25 * (g1 + g2) * t) * (g1 + g2 + 4.0 * g3));
    }
    case ResidualFamily::pauli: {
      const double g1 = detail::constant_or_throw(rates.gamma1, "gamma1");
      const double g2 = detail::constant_or_throw(rates.gamma2, "gamma2");
      const double g3 = detail::constant_or_throw(rates.gamma3, "gamma3");
      const double bracket =
          std::exp(g3 * t) * (g1 + g2) - std::exp(g1 * t) * (g2 + g3);
      const double s = 1.0 - 2.0 * a;
      return s * s * (a - 1.0) * a * bracket * bracket;
    }
    case ResidualFamily::eternal_nm: {
      const double s = 1.0 - 2.0 * a;
      return s * s * (a - 1.0) * a;
    }
    case ResidualFamily::time_dependent: {
      if (a == 0.0 || a == 1.0) return 0.0;
      if (std::abs(a - 0.5) <= 1e-12) {
        const double v = 1.0 + 4.0 * std::cos(t) + std::sin(t);
        return 0.5 * (v - std::abs(v));
      }
      throw ConfigError(
          "oscillatory-family residual is only available at a in {0, 1/2, 1}");
    }
  }
  throw ConfigError("unknown residual family");
}

/// The residual family matching a spec, when one exists.
inline std::optional<ResidualFamily> residual_family_of(const GeneratorSpec& spec) {
  if (const auto* pc = std::get_if<PhaseCovariant>(&spec)) {
    if (pc->rates.gamma1.is_constant() && pc->rates.gamma2.is_constant() &&
        pc->rates.gamma3.is_constant())
      return ResidualFamily::phase_covariant;
    return std::nullopt;
  }
  if (const auto* p = std::get_if<PauliChannel>(&spec)) {
    if (p->rates.gamma1.is_constant() && p->rates.gamma2.is_constant() &&
        p->rates.gamma3.is_constant())
      return ResidualFamily::pauli;
    return std::nullopt;
  }
  if (std::holds_alternative<EternalNM>(spec)) return ResidualFamily::eternal_nm;
  if (std::holds_alternative<TimeDependentModel>(spec))
    return ResidualFamily::time_dependent;
  return std::nullopt;
}

inline RateSet residual_rates_of(const GeneratorSpec& spec) {
  if (const auto* pc = std::get_if<PhaseCovariant>(&spec)) return pc->rates;
  if (const auto* p = std::get_if<PauliChannel>(&spec)) return p->rates;
  if (std::holds_alternative<EternalNM>(spec)) return eternal_nm_rates();
  if (std::holds_alternative<TimeDependentModel>(spec)) return time_dependent_rates();
  throw ConfigError("no residual rate set for this spec");
}

struct ScanPoint {
  double a{};
  double min_ratio{};  // min over the tau' sub-grid of the ratio
  bool optimal{};
};

struct ScanResult {
  std::vector<ScanPoint> points;
  /// Residual roots near the flagged grid points, where a family residual in
  /// a exists (polished to ~1e-10).
  std::vector<double> polished_roots;
};

struct ScanOptions {
  std::size_t tau_grid = 256;  // points of the tau' sub-grid
  double steps_per_unit = 2048.0;
  double theta = 0.0;
  unsigned threads = 1;
};

/// For each a on a uniform grid, the minimum ratio over a tau' sub-grid of
/// (0, tau]; a is flagged optimal when that minimum stays within the flag
/// tolerance of 1.  One propagation per a serves every tau'.
inline ScanResult optimal_state_scan(const GeneratorSpec& spec, double tau,
                                     std::size_t a_grid,
                                     const ScanOptions& opts = {}) {
  if (!(tau > 0.0)) throw Error("optimal_state_scan requires tau > 0");
  if (a_grid < 11) throw Error("optimal_state_scan requires a_grid >= 11");
  const std::size_t steps = default_steps(tau, opts.steps_per_unit);
  const std::size_t m = std::min(opts.tau_grid, steps);
  std::vector<std::size_t> idx(m);
  for (std::size_t k = 0; k < m; ++k)
    idx[k] = ((k + 1) * steps) / m;  // (0, tau], last index = steps

  ScanResult result;
  result.points.resize(a_grid);
  parallel_for(a_grid, opts.threads, [&](std::size_t i) {
    const double a = static_cast<double>(i) / static_cast<double>(a_grid - 1);
    const PureState psi0(a, opts.theta);
    const Trajectory traj = propagate(spec, psi0.density(), tau, steps);
    const auto norms = integrate_generator_norms(traj);
    const auto ratios = prefix_ratios(traj, norms, idx);
    const double mn = *std::min_element(ratios.begin(), ratios.end());
    result.points[i] = {a, mn, mn >= 1.0 - tol::ratio_flag};
  });

  const auto family = residual_family_of(spec);
  if (family && *family != ResidualFamily::time_dependent) {
    const RateSet rates = residual_rates_of(spec);
    const double t_probe = 0.5 * tau;
    const double da = 1.0 / static_cast<double>(a_grid - 1);
    auto abs_res = [&](double a) {
      return std::abs(condition_residual(*family, a, t_probe, rates));
    };
    for (const auto& p : result.points) {
      if (!p.optimal) continue;
      // |residual| is locally unimodal around a root (simple or double), so
      // interval shrinking on values finds it without a sign change.
      double lo = std::max(0.0, p.a - da), hi = std::min(1.0, p.a + da);
      const double gr = 0.6180339887498949;
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      double fc = abs_res(c), fd = abs_res(d);
      while (hi - lo > 1e-10) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          fc = abs_res(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          fd = abs_res(d);
        }
      }
      result.polished_roots.push_back(0.5 * (lo + hi));
    }
  }
  return result;
}

}  // namespace qsl
