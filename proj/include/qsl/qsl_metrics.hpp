#pragma once

// The quantum-speed-limit time and ratio.  For a pure initial state psi0 the
// bound reads
//
//   tau_qsl = sin^2(L(psi0, rho_tau)) / Lambda_op,
//   Lambda_xx = (1/tau) int_0^tau ||L_t(rho_t)||_xx dt,
//
// and the operator norm always gives the tightest of the three bounds.  The
// norm integrals run on the shared propagation grid (the state is never
// re-solved), with panels subdivided at the near-zero minima of the integrand
// where |.|-type kinks live; plain Simpson across those kinks would cost
// several digits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "qsl/bracketing.hpp"
#include "qsl/distance.hpp"
#include "qsl/generator.hpp"
#include "qsl/nonmarkov.hpp"
#include "qsl/norms.hpp"
#include "qsl/propagation.hpp"
#include "qsl/quadrature.hpp"
#include "qsl/state.hpp"

namespace qsl {

enum class Branch : int { plus = +1, minus = -1 };

inline int branch_sign(Branch b) { return static_cast<int>(b); }

struct QSLResult {
  double tau{};
  double lambda_op{}, lambda_tr{}, lambda_hs{};  // time-averaged norms
  double fidelity{};                             // F(psi0, rho_tau)
  double bures{};                                // Bures angle at tau
  double tau_qsl{};
  double ratio{};       // tau_qsl / tau
  double revivals_f{};  // accumulated fidelity revivals, in z units
};

/// Cumulative integrals of the three generator norms at the trajectory nodes.
struct GeneratorNormIntegral {
  std::vector<double> node_times;
  std::vector<double> cum_op, cum_tr, cum_hs;

  double op() const { return cum_op.back(); }
  double tr() const { return cum_tr.back(); }
  double hs() const { return cum_hs.back(); }
};

namespace detail {

inline double golden_min(const std::function<double(double)>& f, double lo,
                         double hi, double time_tol) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > time_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

inline NormTriple generator_norms_at(const Trajectory& traj, double t) {
  return norm_triple(evaluate_generator(traj.spec(), traj.state_at(t), t));
}

inline GeneratorNormIntegral integrate_generator_norms(const Trajectory& traj) {
  const auto& T = traj.times();
  const std::size_t n = T.size();
  GeneratorNormIntegral out;
  out.node_times = T;
  out.cum_op.assign(n, 0.0);
  out.cum_tr.assign(n, 0.0);
  out.cum_hs.assign(n, 0.0);
  if (n < 2) return out;

  std::vector<NormTriple> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = norm_triple(evaluate_generator(traj.spec(), traj.state(i), T[i]));

  double scale = 0.0;
  for (const auto& v : f) scale = std::max(scale, v.op);
  const double dip = std::max(1e-12 * scale, 1e-300);

  // Near-zero local minima of the operator-norm samples mark the kinks; the
  // integrand is smooth everywhere the norm stays positive.
  std::vector<std::vector<double>> splits(n - 1);
  auto op_at = [&traj](double t) { return generator_norms_at(traj, t).op; };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (f[i].op < f[i - 1].op - dip && f[i].op < f[i + 1].op - dip) {
      const double t_star =
          detail::golden_min(op_at, T[i - 1], T[i + 1], 1e-12 * std::max(1.0, T[i]));
      for (std::size_t k : {i - 1, i}) {
        if (t_star > T[k] + tol::time_bisect && t_star < T[k + 1] - tol::time_bisect)
          splits[k].push_back(t_star);
      }
    }
  }

  auto norms_dense = [&traj](double t) { return generator_norms_at(traj, t); };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double acc_op = 0.0, acc_tr = 0.0, acc_hs = 0.0;
    std::vector<double> bounds{T[i]};
    std::sort(splits[i].begin(), splits[i].end());
    for (double sp : splits[i]) bounds.push_back(sp);
    bounds.push_back(T[i + 1]);
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
      const double a = bounds[k], b = bounds[k + 1];
      const NormTriple fa = (a == T[i]) ? f[i] : norms_dense(a);
      const NormTriple fb = (b == T[i + 1]) ? f[i + 1] : norms_dense(b);
      const NormTriple fm = norms_dense(0.5 * (a + b));
      const double w = (b - a) / 6.0;
      acc_op += w * (fa.op + 4.0 * fm.op + fb.op);
      acc_tr += w * (fa.tr + 4.0 * fm.tr + fb.tr);
      acc_hs += w * (fa.hs + 4.0 * fm.hs + fb.hs);
    }
    out.cum_op[i + 1] = out.cum_op[i] + acc_op;
    out.cum_tr[i + 1] = out.cum_tr[i] + acc_tr;
    out.cum_hs[i + 1] = out.cum_hs[i] + acc_hs;
  }
  return out;
}

/// Fidelity between the trajectory states and its own initial state, as a
/// curve on the propagation grid.
inline SampledCurve fidelity_curve(const Trajectory& traj) {
  const BlochVector r0 = traj.bloch_states().front();
  std::vector<double> v(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    v[i] = 0.5 * (1.0 + r0.dot(traj.bloch_states()[i]));
  SampledCurve c;
  c.times = traj.times();
  c.values = std::move(v);
  c.dense = [traj, r0](double t) { return 0.5 * (1.0 + r0.dot(traj.bloch_at(t))); };
  return c;
}

/// Speed-limit result over a whole precomputed trajectory.  tau == 0 returns
/// ratio 1, the limit value for pure initial states.
inline QSLResult qsl_from_trajectory(const Trajectory& traj, const PureState& psi0,
                                     const GeneratorNormIntegral& norms) {
  if ((psi0.bloch() - traj.bloch_states().front()).norm() > 1e-9)
    throw Error("trajectory does not start at the given pure state");
  QSLResult res;
  res.tau = traj.tau();
  if (res.tau == 0.0) {
    res.fidelity = 1.0;
    res.ratio = 1.0;
    return res;
  }
  const auto fb = fidelity_and_bures(psi0, traj.state_at(res.tau));
  res.fidelity = fb.fidelity;
  res.bures = fb.bures;
  res.lambda_op = norms.op() / res.tau;
  res.lambda_tr = norms.tr() / res.tau;
  res.lambda_hs = norms.hs() / res.tau;
  const double numer = 1.0 - res.fidelity;  // = sin^2(bures) for pure psi0
  if (norms.op() < 1e-300) {
    res.ratio = 1.0;
    res.tau_qsl = res.tau;
  } else {
    res.ratio = numer / norms.op();
    res.tau_qsl = res.ratio * res.tau;
  }
  res.revivals_f = 2.0 * variation(fidelity_curve(traj), res.tau).positive;
  return res;
}

inline QSLResult qsl_from_trajectory(const Trajectory& traj, const PureState& psi0) {
  return qsl_from_trajectory(traj, psi0, integrate_generator_norms(traj));
}

/// Propagate psi0 under the spec and evaluate the speed-limit bound at tau.
inline QSLResult qsl_time(const GeneratorSpec& spec, const PureState& psi0,
                          double tau, std::size_t steps) {
  if (tau == 0.0) {
    QSLResult res;
    res.fidelity = 1.0;
    res.ratio = 1.0;
    return res;
  }
  return qsl_from_trajectory(propagate(spec, psi0.density(), tau, steps), psi0);
}

inline QSLResult qsl_time(const GeneratorSpec& spec, const PureState& psi0,
                          double tau) {
  return qsl_time(spec, psi0, tau, default_steps(tau));
}

/// Ratios at a subset of trajectory nodes, sharing one norm integration.
inline std::vector<double> prefix_ratios(const Trajectory& traj,
                                         const GeneratorNormIntegral& norms,
                                         const std::vector<std::size_t>& idx) {
  const BlochVector r0 = traj.bloch_states().front();
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    const double fid = 0.5 * (1.0 + r0.dot(traj.bloch_states()[i]));
    const double numer = 1.0 - fid;
    const double denom = norms.cum_op[i];
    out[k] = (denom < 1e-300) ? 1.0 : numer / denom;
  }
  return out;
}

/// Closed-form ratio for the damped Jaynes-Cummings model started from the
/// excited state: 1 / (2 N / (1 - b_tau^2) + 1), with N the closed-form BLP
/// value.  Returns 1 at tau = 0 by convention.
inline double qsl_ratio_jc_closed(double tau, double gamma0, double lambda) {
  if (tau < 0.0) throw Error("time must be nonnegative");
  const double b = jc_b(tau, gamma0, lambda);
  const double denom = 1.0 - b * b;
  if (tau == 0.0 || denom < 1e-12) return 1.0;
  const double n = blp_jc_analytic(tau, gamma0, lambda);
  return 1.0 / (2.0 * n / denom + 1.0);
}

namespace detail {

inline SampledCurve combine_gh(const SampledCurve& g, const SampledCurve& h,
                               Branch branch) {
  if (g.times.size() != h.times.size())
    throw Error("g and h samples must share one grid");
  const double sign = branch_sign(branch);
  SampledCurve c;
  c.times = g.times;
  c.values.resize(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i)
    c.values[i] = g.values[i] + sign * h.values[i];
  c.dense = [gd = g.dense, hd = h.dense, sign](double t) {
    return gd(t) + sign * hd(t);
  };
  return c;
}

}  // namespace detail

/// Accumulated temporal revivals of the fidelity between the evolved state
/// and the +-z initial state, expressed in z units: the positive part of
/// int d/dt [g(t) + sign h(t)] dt.
inline double revivals_of_fidelity(const SampledCurve& g, const SampledCurve& h,
                                   double tau, Branch branch) {
  return variation(detail::combine_gh(g, h, branch), tau).positive;
}

/// Ratio for coherence non-increasing (z-axis) maps from the deformation and
/// translation components alone:
///   ratio = (F_rev/(1-F) + 1)^{-1},  F = (1 + g(tau) + sign h(tau))/2.
/// With no evolution at all (F = 1 and no revivals) the ratio is 1; after a
/// revival that returns the state to psi0 it is 0.
inline double qsl_ratio_class_b(const SampledCurve& g, const SampledCurve& h,
                                double tau, Branch branch) {
  const double sign = branch_sign(branch);
  const double g_tau = g.dense(tau);
  const double h_tau = h.dense(tau);
  const double one_minus_f = 0.5 * (1.0 - g_tau - sign * h_tau);
  const double rev = revivals_of_fidelity(g, h, tau, branch);
  if (one_minus_f < 1e-12) return rev > 0.0 ? 0.0 : 1.0;
  return 1.0 / (rev / one_minus_f + 1.0);
}

}  // namespace qsl
