#pragma once

// Decay-rate functions of time, as a closed declarative family so that model
// configurations stay reproducible (no arbitrary code injection):
// constants, the Jaynes-Cummings rate, scaled tanh, exponentially damped
// sinusoids, and tabulated data with linear interpolation.

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/jaynes_cummings.hpp"

namespace qsl {

class RateFunction {
 public:
  static RateFunction constant(double value) {
    return RateFunction(Constant{value});
  }
  /// The damped Jaynes-Cummings decay rate with the given coupling and
  /// spectral width.
  static RateFunction jc(double gamma0, double lambda) {
    detail::jc_check_args(0.0, gamma0, lambda);
    return RateFunction(JC{gamma0, lambda});
  }
  /// amplitude * tanh(t)
  static RateFunction tanh_scaled(double amplitude) {
    return RateFunction(Tanh{amplitude});
  }
  /// amplitude * e^{-decay t} (offset + sin_c sin(freq t) + cos_c cos(freq t))
  static RateFunction exp_sinusoid(double amplitude, double decay, double offset,
                                   double sin_c, double cos_c, double freq) {
    return RateFunction(ExpSinusoid{amplitude, decay, offset, sin_c, cos_c, freq});
  }
  /// Piecewise-linear interpolation of (times, values); clamped outside the
  /// table.  Times must be strictly increasing.
  static RateFunction tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
      throw ConfigError("tabulated rate needs matching times/values with >= 2 entries");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw ConfigError("tabulated rate times must be strictly increasing");
    return RateFunction(Table{std::move(times), std::move(values)});
  }

  /// factor * inner(t)
  static RateFunction scaled(double factor, RateFunction inner) {
    if (inner.is_constant())
      return RateFunction(Constant{factor * inner.constant_value()});
    return RateFunction(Scaled{factor, std::make_shared<RateFunction>(std::move(inner))});
  }

  double operator()(double t) const {
    return std::visit([t](const auto& f) { return f(t); }, impl_);
  }

  bool is_constant() const { return std::holds_alternative<Constant>(impl_); }
  double constant_value() const {
    if (const auto* c = std::get_if<Constant>(&impl_)) return c->value;
    throw ConfigError("rate function is not a constant");
  }

  /// Canonical text form, used when echoing resolved configurations.
  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* c = std::get_if<Constant>(&impl_)) {
      os << "constant(" << c->value << ")";
    } else if (const auto* j = std::get_if<JC>(&impl_)) {
      os << "jc(gamma0=" << j->gamma0 << ",lambda=" << j->lambda << ")";
    } else if (const auto* h = std::get_if<Tanh>(&impl_)) {
      os << "tanh_scaled(" << h->amplitude << ")";
    } else if (const auto* e = std::get_if<ExpSinusoid>(&impl_)) {
      os << "exp_sinusoid(amp=" << e->amplitude << ",decay=" << e->decay
         << ",offset=" << e->offset << ",sin=" << e->sin_c << ",cos=" << e->cos_c
         << ",freq=" << e->freq << ")";
    } else if (const auto* s = std::get_if<Scaled>(&impl_)) {
      os << "scaled(" << s->factor << "," << s->inner->describe() << ")";
    } else {
      const auto& tb = std::get<Table>(impl_);
      os << "tabulated(" << tb.times.size() << " points)";
    }
    return os.str();
  }

 private:
  struct Constant {
    double value;
    double operator()(double) const { return value; }
  };
  struct JC {
    double gamma0, lambda;
    double operator()(double t) const { return jc_rate(t, gamma0, lambda); }
  };
  struct Tanh {
    double amplitude;
    double operator()(double t) const { return amplitude * std::tanh(t); }
  };
  struct ExpSinusoid {
    double amplitude, decay, offset, sin_c, cos_c, freq;
    double operator()(double t) const {
      return amplitude * std::exp(-decay * t) *
             (offset + sin_c * std::sin(freq * t) + cos_c * std::cos(freq * t));
    }
  };
  struct Scaled {
    double factor;
    std::shared_ptr<RateFunction> inner;
    double operator()(double t) const { return factor * (*inner)(t); }
  };
  struct Table {
    std::vector<double> times, values;
    double operator()(double t) const {
      if (t <= times.front()) return values.front();
      if (t >= times.back()) return values.back();
      auto it = std::upper_bound(times.begin(), times.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - times.begin());
      const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
      return values[i - 1] + w * (values[i] - values[i - 1]);
    }
  };

  using Impl = std::variant<Constant, JC, Tanh, ExpSinusoid, Scaled, Table>;
  explicit RateFunction(Impl impl) : impl_(std::move(impl)) {}

  Impl impl_;
};

/// The rate functions of a phase-covariant-form master equation: raising
/// (gamma1), lowering (gamma2), dephasing (gamma3), and the Hamiltonian
/// frequency omega.
struct RateSet {
  RateFunction gamma1, gamma2, gamma3, omega;
};

}  // namespace qsl
