#pragma once

// Master-equation families and evaluation of the time-local generator
// L_t(rho), both as a 2x2 matrix and as the equivalent affine vector field on
// Bloch coordinates.
//
// Phase-covariant form (hbar = 1):
//   L_t rho = i w(t) [rho, sz]
//           + g1(t)/2 (s+ rho s-  - 1/2 {s- s+, rho})
//           + g2(t)/2 (s- rho s+  - 1/2 {s+ s-, rho})
//           + g3(t)/2 (sz rho sz - rho)
// Pauli form:
//   L_t rho = sum_i g_i(t) (s_i rho s_i - rho)

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsl/constants.hpp"
#include "qsl/errors.hpp"
#include "qsl/jaynes_cummings.hpp"
#include "qsl/mat2.hpp"
#include "qsl/quadrature.hpp"
#include "qsl/rates.hpp"
#include "qsl/state.hpp"

namespace qsl {

struct PhaseCovariant {
  RateSet rates;
};

struct PauliChannel {
  RateSet rates;  // omega is ignored; the Pauli form has no Hamiltonian term
};

struct JaynesCummings {
  double gamma0;
  double lambda;
  JaynesCummings(double gamma0_, double lambda_) : gamma0(gamma0_), lambda(lambda_) {
    if (!(gamma0 > 0.0) || !(lambda > 0.0))
      throw ConfigError("Jaynes-Cummings requires gamma0 > 0 and lambda > 0");
  }
};

/// Pauli channel with rates (1/2, 1/2, -tanh(t)/2): completely positive and
/// never CP-divisible for t > 0, yet free of trace-distance backflow.
struct EternalNM {};

/// The shipped oscillatory phase-covariant model with
/// g1 = g2 = e^{-t/4}(1 + sin t), g3 = 2 e^{-t/4} cos t, w = 0.
struct TimeDependentModel {};

/// Commutative phase-covariant dynamics: g1 = gamma(t), g2 = kappa gamma(t),
/// g3 = w = 0, with 0 <= kappa <= 1.  Carries a memoized integral of gamma.
struct CommutativePC {
  RateFunction gamma;
  double kappa;
  std::shared_ptr<CumulativeIntegral> accumulated;

  CommutativePC(RateFunction gamma_, double kappa_)
      : gamma(std::move(gamma_)), kappa(kappa_) {
    if (!(kappa >= 0.0 && kappa <= 1.0))
      throw ConfigError("commutative phase-covariant kappa must lie in [0,1]");
    accumulated = std::make_shared<CumulativeIntegral>(
        [g = gamma](double t) { return g(t); });
  }

  /// Gamma(t) = (kappa+1)/2 int_0^t gamma
  double big_gamma(double t) const { return 0.5 * (kappa + 1.0) * (*accumulated)(t); }
};

struct JumpTerm {
  RateFunction rate;
  Mat2 op;
};

struct GenericLindblad {
  Mat2 hamiltonian;
  std::vector<JumpTerm> jumps;

  GenericLindblad(Mat2 h, std::vector<JumpTerm> j)
      : hamiltonian(h), jumps(std::move(j)) {
    if (jumps.empty())
      throw ConfigError("generic Lindblad form needs at least one jump operator");
  }
};

using GeneratorSpec = std::variant<PhaseCovariant, PauliChannel, JaynesCummings,
                                   EternalNM, TimeDependentModel, CommutativePC,
                                   GenericLindblad>;

inline RateSet eternal_nm_rates() {
  return {RateFunction::constant(0.5), RateFunction::constant(0.5),
          RateFunction::tanh_scaled(-0.5), RateFunction::constant(0.0)};
}

inline RateSet time_dependent_rates() {
  return {RateFunction::exp_sinusoid(1.0, 0.25, 1.0, 1.0, 0.0, 1.0),
          RateFunction::exp_sinusoid(1.0, 0.25, 1.0, 1.0, 0.0, 1.0),
          RateFunction::exp_sinusoid(2.0, 0.25, 0.0, 0.0, 1.0, 1.0),
          RateFunction::constant(0.0)};
}

/// Phase-covariant-form rate view where one exists (not for the Pauli family
/// or generic Lindblad specs).
inline std::optional<RateSet> phase_covariant_rates(const GeneratorSpec& spec) {
  if (const auto* pc = std::get_if<PhaseCovariant>(&spec)) return pc->rates;
  if (const auto* jc = std::get_if<JaynesCummings>(&spec)) {
    return RateSet{RateFunction::constant(0.0),
                   RateFunction::scaled(2.0, RateFunction::jc(jc->gamma0, jc->lambda)),
                   RateFunction::constant(0.0), RateFunction::constant(0.0)};
  }
  if (std::holds_alternative<TimeDependentModel>(spec)) return time_dependent_rates();
  if (const auto* c = std::get_if<CommutativePC>(&spec)) {
    return RateSet{c->gamma, RateFunction::scaled(c->kappa, c->gamma),
                   RateFunction::constant(0.0), RateFunction::constant(0.0)};
  }
  return std::nullopt;
}

namespace detail {

inline double finite_rate(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericsError(std::string("non-finite rate: ") + what);
  return v;
}

/// Phase-covariant generator matrix for instantaneous rate values.
inline Mat2 pc_generator_matrix(double g1, double g2, double g3, double w,
                                const Mat2& rho) {
  const Mat2 sp = sigma_plus();
  const Mat2 sm = sigma_minus();
  const Mat2 sz = sigma_z();
  Mat2 out = cplx(0.0, w) * commutator(rho, sz);
  out += 0.5 * g1 * (sp * rho * sm - 0.5 * anticommutator(sm * sp, rho));
  out += 0.5 * g2 * (sm * rho * sp - 0.5 * anticommutator(sp * sm, rho));
  out += 0.5 * g3 * (sz * rho * sz - rho);
  return out;
}

inline Mat2 pauli_generator_matrix(double g1, double g2, double g3, const Mat2& rho) {
  Mat2 out = g1 * (sigma_x() * rho * sigma_x() - rho);
  out += g2 * (sigma_y() * rho * sigma_y() - rho);
  out += g3 * (sigma_z() * rho * sigma_z() - rho);
  return out;
}

inline Mat2 generic_generator_matrix(const GenericLindblad& gl, const Mat2& rho,
                                     double t) {
  Mat2 out = cplx(0.0, 1.0) * commutator(rho, gl.hamiltonian);
  for (const auto& j : gl.jumps) {
    const double g = finite_rate(j.rate(t), "generic jump rate");
    const Mat2 ad = j.op.adjoint();
    out += g * (j.op * rho * ad - 0.5 * anticommutator(ad * j.op, rho));
  }
  return out;
}

}  // namespace detail

/// L_t(rho) as a 2x2 matrix.  Rejects t < 0 and non-finite rate values (the
/// Jaynes-Cummings rate diverges where b_t = 0).
inline Mat2 evaluate_generator(const GeneratorSpec& spec, const DensityMatrix& rho,
                               double t) {
  if (t < 0.0) throw Error("generator evaluation requires t >= 0");
  const Mat2& m = rho.matrix();
  using detail::finite_rate;
  return std::visit(
      [&](const auto& s) -> Mat2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseCovariant>) {
          return detail::pc_generator_matrix(
              finite_rate(s.rates.gamma1(t), "gamma1"),
              finite_rate(s.rates.gamma2(t), "gamma2"),
              finite_rate(s.rates.gamma3(t), "gamma3"),
              finite_rate(s.rates.omega(t), "omega"), m);
        } else if constexpr (std::is_same_v<T, PauliChannel>) {
          return detail::pauli_generator_matrix(
              finite_rate(s.rates.gamma1(t), "gamma1"),
              finite_rate(s.rates.gamma2(t), "gamma2"),
              finite_rate(s.rates.gamma3(t), "gamma3"), m);
        } else if constexpr (std::is_same_v<T, JaynesCummings>) {
          const double g = finite_rate(jc_rate(t, s.gamma0, s.lambda), "jc rate");
          return detail::pc_generator_matrix(0.0, 2.0 * g, 0.0, 0.0, m);
        } else if constexpr (std::is_same_v<T, EternalNM>) {
          return detail::pauli_generator_matrix(0.5, 0.5, -0.5 * std::tanh(t), m);
        } else if constexpr (std::is_same_v<T, TimeDependentModel>) {
          const double e = std::exp(-0.25 * t);
          const double g12 = e * (1.0 + std::sin(t));
          const double g3 = 2.0 * e * std::cos(t);
          return detail::pc_generator_matrix(g12, g12, g3, 0.0, m);
        } else if constexpr (std::is_same_v<T, CommutativePC>) {
          const double g = finite_rate(s.gamma(t), "gamma");
          return detail::pc_generator_matrix(g, s.kappa * g, 0.0, 0.0, m);
        } else {
          return detail::generic_generator_matrix(s, m, t);
        }
      },
      spec);
}

/// The generator as a vector field on Bloch coordinates, dr/dt = field(r, t).
/// The phase-covariant and Pauli families use their affine forms directly;
/// generic specs go through the matrix route.  No ball check is applied: the
/// integrator may probe slightly outside the ball at intermediate stages.
inline BlochVector bloch_field(const GeneratorSpec& spec, const BlochVector& r,
                               double t) {
  using detail::finite_rate;
  const auto pc_field = [&](double g1, double g2, double g3, double w) {
    const double a = 0.25 * (g1 + g2) + g3;
    return BlochVector{-a * r.x - 2.0 * w * r.y, 2.0 * w * r.x - a * r.y,
                       -0.5 * (g1 + g2) * r.z + 0.5 * (g1 - g2)};
  };
  return std::visit(
      [&](const auto& s) -> BlochVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseCovariant>) {
          return pc_field(finite_rate(s.rates.gamma1(t), "gamma1"),
                          finite_rate(s.rates.gamma2(t), "gamma2"),
                          finite_rate(s.rates.gamma3(t), "gamma3"),
                          finite_rate(s.rates.omega(t), "omega"));
        } else if constexpr (std::is_same_v<T, PauliChannel>) {
          const double g1 = finite_rate(s.rates.gamma1(t), "gamma1");
          const double g2 = finite_rate(s.rates.gamma2(t), "gamma2");
          const double g3 = finite_rate(s.rates.gamma3(t), "gamma3");
          return {-2.0 * (g2 + g3) * r.x, -2.0 * (g1 + g3) * r.y,
                  -2.0 * (g1 + g2) * r.z};
        } else if constexpr (std::is_same_v<T, JaynesCummings>) {
          const double g = finite_rate(jc_rate(t, s.gamma0, s.lambda), "jc rate");
          return pc_field(0.0, 2.0 * g, 0.0, 0.0);
        } else if constexpr (std::is_same_v<T, EternalNM>) {
          const double g3 = -0.5 * std::tanh(t);
          return {-2.0 * (0.5 + g3) * r.x, -2.0 * (0.5 + g3) * r.y, -2.0 * r.z};
        } else if constexpr (std::is_same_v<T, TimeDependentModel>) {
          const double e = std::exp(-0.25 * t);
          const double g12 = e * (1.0 + std::sin(t));
          const double g3 = 2.0 * e * std::cos(t);
          return pc_field(g12, g12, g3, 0.0);
        } else if constexpr (std::is_same_v<T, CommutativePC>) {
          const double g = finite_rate(s.gamma(t), "gamma");
          return pc_field(g, s.kappa * g, 0.0, 0.0);
        } else {
          const Mat2 rho = density_matrix_of_bloch(r);
          const Mat2 dm = detail::generic_generator_matrix(s, rho, t);
          return {2.0 * dm.m01.real(), -2.0 * dm.m01.imag(),
                  (dm.m00 - dm.m11).real()};
        }
      },
      spec);
}

/// Closed-form z-axis deformation and translation of the commutative
/// phase-covariant family:
///   g(t) = e^{-Gamma(t)},  h(t) = (1-kappa)/(1+kappa) (1 - e^{-Gamma(t)}),
/// with Gamma(t) = (kappa+1)/2 int_0^t gamma.
inline std::pair<double, double> commutative_pc_gh(double t, double kappa,
                                                   const RateFunction& gamma) {
  if (t < 0.0) throw Error("time must be nonnegative");
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw ConfigError("commutative phase-covariant kappa must lie in [0,1]");
  const double big =
      0.5 * (kappa + 1.0) *
      adaptive_simpson([&gamma](double s) { return gamma(s); }, 0.0, t, tol::rate_quad);
  const double g = std::exp(-big);
  return {g, (1.0 - kappa) / (1.0 + kappa) * (1.0 - g)};
}

}  // namespace qsl
