#pragma once

// State trajectories for any generator spec.  Integration happens in Bloch
// coordinates (three real ODEs), which makes trace and hermiticity exact by
// construction; the integrator is fixed-step classical RK4 with a Richardson
// step-size gate, because the downstream sign-change detectors need
// deterministic grids.  Families whose solution is known in closed form are
// dispatched to analytic fast paths.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsl/bracketing.hpp"
#include "qsl/constants.hpp"
#include "qsl/errors.hpp"
#include "qsl/generator.hpp"
#include "qsl/state.hpp"

namespace qsl {

enum class PropagationMethod { analytic, numeric };

struct PropagateOptions {
  /// Force a method; by default analytic paths are used where they exist.
  std::optional<PropagationMethod> method;
  /// Skip the Richardson step-size gate (used by the gate's own tests).
  bool skip_step_gate = false;
};

class Trajectory {
 public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<BlochVector>& bloch_states() const { return r_; }
  const std::vector<BlochVector>& derivatives() const { return dr_; }
  const GeneratorSpec& spec() const { return spec_; }
  PropagationMethod method() const { return method_; }
  double tau() const { return times_.back(); }
  std::size_t size() const { return times_.size(); }

  BlochVector bloch_at(double t) const {
    if (dense_) return dense_(t);
    return hermite_at(t);
  }
  BlochVector derivative_at(double t) const {
    if (dense_deriv_) return dense_deriv_(t);
    // fall back to the generator field at the interpolated state
    return bloch_field(spec_, bloch_at(t), t);
  }
  DensityMatrix state_at(double t) const {
    return density_from_bloch_unchecked(bloch_at(t));
  }
  DensityMatrix state(std::size_t i) const {
    return density_from_bloch_unchecked(r_.at(i));
  }

 private:
  explicit Trajectory(GeneratorSpec spec)
      : spec_(std::move(spec)), method_(PropagationMethod::numeric) {}

  std::vector<double> times_;
  std::vector<BlochVector> r_;
  std::vector<BlochVector> dr_;
  GeneratorSpec spec_;
  PropagationMethod method_;
  std::function<BlochVector(double)> dense_;
  std::function<BlochVector(double)> dense_deriv_;

  BlochVector hermite_at(double t) const {
    if (t <= times_.front()) return r_.front();
    if (t >= times_.back()) return r_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[i + 1] - times_[i];
    const double s = (t - times_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double c0 = 2 * s3 - 3 * s2 + 1;
    const double c1 = (s3 - 2 * s2 + s) * h;
    const double c2 = -2 * s3 + 3 * s2;
    const double c3 = (s3 - s2) * h;
    const BlochVector &a = r_[i], &b = r_[i + 1], &da = dr_[i], &db = dr_[i + 1];
    return {c0 * a.x + c1 * da.x + c2 * b.x + c3 * db.x,
            c0 * a.y + c1 * da.y + c2 * b.y + c3 * db.y,
            c0 * a.z + c1 * da.z + c2 * b.z + c3 * db.z};
  }

  friend Trajectory propagate(const GeneratorSpec&, const DensityMatrix&, double,
                              std::size_t, const PropagateOptions&);
};

/// Grid resolution used when the caller does not choose one.
inline std::size_t default_steps(double tau, double per_unit_time = 2048.0) {
  const double n = std::ceil(per_unit_time * std::max(tau, 0.0));
  std::size_t steps = static_cast<std::size_t>(std::max(n, 16.0));
  if (steps % 2 != 0) ++steps;
  return steps;
}

namespace detail {

struct AnalyticPath {
  std::function<BlochVector(double)> r;
  std::function<BlochVector(double)> dr;
};

inline AnalyticPath jc_path(const JaynesCummings& s, BlochVector r0) {
  const double g0 = s.gamma0, la = s.lambda;
  auto r = [=](double t) -> BlochVector {
    const double b = jc_b(t, g0, la);
    return {b * r0.x, b * r0.y, b * b * (1.0 + r0.z) - 1.0};
  };
  auto dr = [=](double t) -> BlochVector {
    const double b = jc_b(t, g0, la);
    const double bd = jc_b_dot(t, g0, la);
    return {bd * r0.x, bd * r0.y, 2.0 * b * bd * (1.0 + r0.z)};
  };
  return {r, dr};
}

inline AnalyticPath eternal_nm_path(BlochVector r0) {
  auto r = [=](double t) -> BlochVector {
    const double u = 0.5 * (1.0 + std::exp(-2.0 * t));  // e^{-t} cosh t
    const double w = std::exp(-2.0 * t);
    return {u * r0.x, u * r0.y, w * r0.z};
  };
  auto dr = [=](double t) -> BlochVector {
    const double e = std::exp(-2.0 * t);
    return {-e * r0.x, -e * r0.y, -2.0 * e * r0.z};
  };
  return {r, dr};
}

inline AnalyticPath constant_pc_path(double g1, double g2, double g3, double w,
                                     BlochVector r0) {
  const double alpha = 0.25 * (g1 + g2) + g3;
  const double beta = 0.5 * (g1 + g2);
  const double delta = 0.5 * (g1 - g2);
  auto zfun = [=](double t) -> std::pair<double, double> {  // z, dz/dt
    if (beta != 0.0) {
      const double zstar = delta / beta;
      const double e = std::exp(-beta * t);
      return {zstar + (r0.z - zstar) * e, -beta * (r0.z - zstar) * e};
    }
    return {r0.z + delta * t, delta};
  };
  auto r = [=](double t) -> BlochVector {
    const double e = std::exp(-alpha * t);
    const double c = std::cos(2.0 * w * t), sn = std::sin(2.0 * w * t);
    return {e * (r0.x * c - r0.y * sn), e * (r0.x * sn + r0.y * c), zfun(t).first};
  };
  auto dr = [=](double t) -> BlochVector {
    const double e = std::exp(-alpha * t);
    const double c = std::cos(2.0 * w * t), sn = std::sin(2.0 * w * t);
    const double x = e * (r0.x * c - r0.y * sn);
    const double y = e * (r0.x * sn + r0.y * c);
    return {-alpha * x - 2.0 * w * y, 2.0 * w * x - alpha * y, zfun(t).second};
  };
  return {r, dr};
}

inline AnalyticPath constant_pauli_path(double g1, double g2, double g3,
                                        BlochVector r0) {
  const double kx = 2.0 * (g2 + g3), ky = 2.0 * (g1 + g3), kz = 2.0 * (g1 + g2);
  auto r = [=](double t) -> BlochVector {
    return {r0.x * std::exp(-kx * t), r0.y * std::exp(-ky * t),
            r0.z * std::exp(-kz * t)};
  };
  auto dr = [=](double t) -> BlochVector {
    return {-kx * r0.x * std::exp(-kx * t), -ky * r0.y * std::exp(-ky * t),
            -kz * r0.z * std::exp(-kz * t)};
  };
  return {r, dr};
}

inline AnalyticPath commutative_pc_path(const CommutativePC& s, BlochVector r0) {
  const double zstar = (1.0 - s.kappa) / (1.0 + s.kappa);
  auto acc = s.accumulated;
  const double kap = s.kappa;
  auto gamma = s.gamma;
  auto r = [=](double t) -> BlochVector {
    const double big = 0.5 * (kap + 1.0) * (*acc)(t);
    const double e = std::exp(-big);
    return {r0.x * std::sqrt(e), r0.y * std::sqrt(e), zstar + (r0.z - zstar) * e};
  };
  auto dr = [=](double t) -> BlochVector {
    const double big = 0.5 * (kap + 1.0) * (*acc)(t);
    const double rate = 0.5 * (kap + 1.0) * gamma(t);  // dGamma/dt
    const double e = std::exp(-big);
    const double se = std::sqrt(e);
    return {-0.5 * rate * r0.x * se, -0.5 * rate * r0.y * se,
            -rate * (r0.z - zstar) * e};
  };
  return {r, dr};
}

// Primitives of e^{-s/4}, e^{-s/4} sin s and e^{-s/4} cos s from 0 to t.
inline double td_int_exp(double t) { return 4.0 * (1.0 - std::exp(-0.25 * t)); }
inline double td_int_exp_sin(double t) {
  return (16.0 / 17.0) *
         (std::exp(-0.25 * t) * (-0.25 * std::sin(t) - std::cos(t)) + 1.0);
}
inline double td_int_exp_cos(double t) {
  return (16.0 / 17.0) *
         (std::exp(-0.25 * t) * (std::sin(t) - 0.25 * std::cos(t)) + 0.25);
}

inline AnalyticPath time_dependent_path(BlochVector r0) {
  auto r = [=](double t) -> BlochVector {
    const double i0 = td_int_exp(t), is = td_int_exp_sin(t), ic = td_int_exp_cos(t);
    const double a = 0.5 * (i0 + is) + 2.0 * ic;  // int of g1/2 + g3
    const double bz = i0 + is;                    // int of g1 (= (g1+g2)/2)
    const double e = std::exp(-a);
    return {r0.x * e, r0.y * e, r0.z * std::exp(-bz)};
  };
  auto dr = [=](double t) -> BlochVector {
    const double i0 = td_int_exp(t), is = td_int_exp_sin(t), ic = td_int_exp_cos(t);
    const double a = 0.5 * (i0 + is) + 2.0 * ic;
    const double bz = i0 + is;
    const double et = std::exp(-0.25 * t);
    const double g1 = et * (1.0 + std::sin(t));
    const double alpha = 0.5 * g1 + 2.0 * et * std::cos(t);
    const double e = std::exp(-a);
    return {-alpha * r0.x * e, -alpha * r0.y * e, -g1 * r0.z * std::exp(-bz)};
  };
  return {r, dr};
}

inline std::optional<AnalyticPath> analytic_path(const GeneratorSpec& spec,
                                                 BlochVector r0) {
  if (const auto* jc = std::get_if<JaynesCummings>(&spec)) return jc_path(*jc, r0);
  if (std::holds_alternative<EternalNM>(spec)) return eternal_nm_path(r0);
  if (std::holds_alternative<TimeDependentModel>(spec)) return time_dependent_path(r0);
  if (const auto* c = std::get_if<CommutativePC>(&spec))
    return commutative_pc_path(*c, r0);
  if (const auto* pc = std::get_if<PhaseCovariant>(&spec)) {
    const auto& rs = pc->rates;
    if (rs.gamma1.is_constant() && rs.gamma2.is_constant() &&
        rs.gamma3.is_constant() && rs.omega.is_constant())
      return constant_pc_path(rs.gamma1.constant_value(), rs.gamma2.constant_value(),
                              rs.gamma3.constant_value(), rs.omega.constant_value(),
                              r0);
    return std::nullopt;
  }
  if (const auto* p = std::get_if<PauliChannel>(&spec)) {
    const auto& rs = p->rates;
    if (rs.gamma1.is_constant() && rs.gamma2.is_constant() && rs.gamma3.is_constant())
      return constant_pauli_path(rs.gamma1.constant_value(),
                                 rs.gamma2.constant_value(),
                                 rs.gamma3.constant_value(), r0);
    return std::nullopt;
  }
  return std::nullopt;
}

inline BlochVector rk4_step(const GeneratorSpec& spec, const BlochVector& r, double t,
                            double h) {
  const BlochVector k1 = bloch_field(spec, r, t);
  const BlochVector k2 = bloch_field(spec, r + 0.5 * h * k1, t + 0.5 * h);
  const BlochVector k3 = bloch_field(spec, r + 0.5 * h * k2, t + 0.5 * h);
  const BlochVector k4 = bloch_field(spec, r + h * k3, t + h);
  return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_state(const BlochVector& r) {
  if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z))
    throw PhysicsError("integration diverged: non-finite state");
  if (r.norm() > 1.0 + tol::drift_hard)
    throw PhysicsError("state drifted outside the Bloch ball beyond the hard limit");
}

}  // namespace detail

/// Propagate rho0 under the spec until tau with the given number of steps.
/// tau == 0 returns a single-point trajectory.
inline Trajectory propagate(const GeneratorSpec& spec, const DensityMatrix& rho0,
                            double tau, std::size_t steps,
                            const PropagateOptions& opts = {}) {
  if (tau < 0.0) throw Error("propagation requires tau >= 0");
  Trajectory traj(spec);
  const BlochVector r0 = density_to_bloch(rho0);

  if (tau == 0.0) {
    traj.times_ = {0.0};
    traj.r_ = {r0};
    traj.dr_ = {bloch_field(spec, r0, 0.0)};
    traj.method_ = PropagationMethod::analytic;
    traj.dense_ = [r0](double) { return r0; };
    return traj;
  }

  if (steps < 16) throw Error("propagation requires steps >= 16");
  if (steps % 2 != 0) ++steps;
  const double h = tau / static_cast<double>(steps);

  auto analytic = detail::analytic_path(spec, r0);
  const bool use_analytic =
      opts.method ? (*opts.method == PropagationMethod::analytic)
                  : analytic.has_value();
  if (use_analytic && !analytic)
    throw Error("no analytic propagation path for this spec");

  traj.times_.resize(steps + 1);
  traj.r_.resize(steps + 1);
  traj.dr_.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    traj.times_[i] = (i == steps) ? tau : h * static_cast<double>(i);

  if (use_analytic) {
    traj.method_ = PropagationMethod::analytic;
    for (std::size_t i = 0; i <= steps; ++i) {
      traj.r_[i] = analytic->r(traj.times_[i]);
      traj.dr_[i] = analytic->dr(traj.times_[i]);
      detail::check_state(traj.r_[i]);
    }
    traj.dense_ = analytic->r;
    traj.dense_deriv_ = analytic->dr;
    return traj;
  }

  traj.method_ = PropagationMethod::numeric;
  traj.r_[0] = r0;
  traj.dr_[0] = bloch_field(spec, r0, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    traj.r_[i + 1] = detail::rk4_step(spec, traj.r_[i], traj.times_[i], h);
    detail::check_state(traj.r_[i + 1]);
    traj.dr_[i + 1] = bloch_field(spec, traj.r_[i + 1], traj.times_[i + 1]);
  }

  if (!opts.skip_step_gate) {
    // Richardson estimate from a half-resolution pass, compared at every
    // shared node; the endpoint alone would miss transient error on strongly
    // contracting flows.
    BlochVector rc = r0;
    double worst = 0.0;
    for (std::size_t i = 0; i < steps / 2; ++i) {
      rc = detail::rk4_step(spec, rc, 2.0 * h * static_cast<double>(i), 2.0 * h);
      worst = std::max(worst, (traj.r_[2 * (i + 1)] - rc).norm());
    }
    const double est = worst / 15.0;
    if (est > tol::step_gate)
      throw NumericsError("step-size gate failed: Richardson estimate " +
                          std::to_string(est) + " exceeds " +
                          std::to_string(tol::step_gate) + "; increase steps");
  }
  return traj;
}

inline Trajectory propagate(const GeneratorSpec& spec, const DensityMatrix& rho0,
                            double tau) {
  return propagate(spec, rho0, tau, default_steps(tau));
}

/// The affine Bloch decomposition r(t) = A(t) r(0) + s(t), sampled on the
/// propagation grid.  s comes from propagating the maximally mixed state, the
/// columns of A from propagating the three unit Bloch vectors and subtracting
/// s.  g = A(3,3) and h = s_3 are the z-axis deformation and translation.
struct AffineBlochMap {
  std::vector<double> times;
  std::vector<std::array<double, 9>> a;  // row-major deformation samples
  std::vector<BlochVector> s;            // translation samples
  Trajectory origin, col_x, col_y, col_z;

  double g(std::size_t i) const { return a[i][8]; }
  double h(std::size_t i) const { return s[i].z; }
  double g_at(double t) const {
    return col_z.bloch_at(t).z - origin.bloch_at(t).z;
  }
  double h_at(double t) const { return origin.bloch_at(t).z; }

  BlochVector apply(std::size_t i, const BlochVector& r0) const {
    const auto& m = a[i];
    return {m[0] * r0.x + m[1] * r0.y + m[2] * r0.z + s[i].x,
            m[3] * r0.x + m[4] * r0.y + m[5] * r0.z + s[i].y,
            m[6] * r0.x + m[7] * r0.y + m[8] * r0.z + s[i].z};
  }

  // The curves capture trajectory copies, so they stay valid on their own.
  SampledCurve g_curve() const {
    std::vector<double> v(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) v[i] = g(i);
    SampledCurve c;
    c.times = times;
    c.values = std::move(v);
    c.dense = [cz = col_z, o = origin](double t) {
      return cz.bloch_at(t).z - o.bloch_at(t).z;
    };
    return c;
  }
  SampledCurve h_curve() const {
    std::vector<double> v(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) v[i] = h(i);
    SampledCurve c;
    c.times = times;
    c.values = std::move(v);
    c.dense = [o = origin](double t) { return o.bloch_at(t).z; };
    return c;
  }
};

inline AffineBlochMap extract_affine_map(const GeneratorSpec& spec, double tau,
                                         std::size_t steps,
                                         const PropagateOptions& opts = {}) {
  Trajectory t0 = propagate(spec, DensityMatrix::maximally_mixed(), tau, steps, opts);
  Trajectory tx = propagate(spec, bloch_to_density({1, 0, 0}), tau, steps, opts);
  Trajectory ty = propagate(spec, bloch_to_density({0, 1, 0}), tau, steps, opts);
  Trajectory tz = propagate(spec, bloch_to_density({0, 0, 1}), tau, steps, opts);

  AffineBlochMap map{{}, {}, {}, std::move(t0), std::move(tx), std::move(ty),
                     std::move(tz)};
  map.times = map.origin.times();
  const std::size_t n = map.times.size();
  map.a.resize(n);
  map.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BlochVector sv = map.origin.bloch_states()[i];
    const BlochVector cx = map.col_x.bloch_states()[i] - sv;
    const BlochVector cy = map.col_y.bloch_states()[i] - sv;
    const BlochVector cz = map.col_z.bloch_states()[i] - sv;
    map.s[i] = sv;
    map.a[i] = {cx.x, cy.x, cz.x, cx.y, cy.y, cz.y, cx.z, cy.z, cz.z};
  }
  return map;
}

}  // namespace qsl
