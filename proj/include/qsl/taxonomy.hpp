#pragma once

// Taxonomy of one-qubit dynamical maps by the behavior of the +-z initial
// pair, with the closed-form ratio attached to each class:
//
//   A    coherences of the evolved +-z states grow somewhere: no closed form,
//        and the bound is missed from the violation time on.
//   B    the +-z states stay on the z axis; the general two-function form
//        applies (see qsl_ratio_class_b).
//   Ci   within B: dg/dt >= 0 <=> dh/dt >= 0 at all times (branch z0 = +1).
//   Cii  within B: dg/dt >= 0 <=> dh/dt <= 0 at all times (branch z0 = -1).
//   Ciii within Ci: both derivatives nonpositive throughout.
//   Civ  within Cii: dg/dt <= 0 and dh/dt >= 0 throughout.
//   D    within B: unital, h == 0.
//
// The most specific label wins.  For Ciii/Civ/D the ratio formula splits on
// the sign of g(tau); the negative branch makes the bound tight exactly when
// the backflow value equals |g(tau)|.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qsl/bracketing.hpp"
#include "qsl/constants.hpp"
#include "qsl/errors.hpp"
#include "qsl/generator.hpp"
#include "qsl/propagation.hpp"
#include "qsl/qsl_metrics.hpp"

namespace qsl {

enum class MapClass { A, B, Ci, Cii, Ciii, Civ, D };

inline const char* to_string(MapClass c) {
  switch (c) {
    case MapClass::A: return "A";
    case MapClass::B: return "B";
    case MapClass::Ci: return "Ci";
    case MapClass::Cii: return "Cii";
    case MapClass::Ciii: return "Ciii";
    case MapClass::Civ: return "Civ";
    case MapClass::D: return "D";
  }
  return "?";
}

struct TaxonomyError : Error {
  using Error::Error;
};

struct TaxonomyLabel {
  MapClass map_class{};
  Branch branch{Branch::plus};  // z(0) sign the closed form applies to
  double g_tau{}, h_tau{};
  std::string formula_id;
  double violation_time = -1.0;  // first coherence growth (class A only)
};

namespace detail {

// Derivative signs on the grid via central differences with a dead band; an
// extremum point carries both signs (encoded 0).
inline std::vector<int> derivative_signs(const std::vector<double>& t,
                                         const std::vector<double>& v) {
  std::vector<int> s(v.size(), 0);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double d = (v[i + 1] - v[i - 1]) / (t[i + 1] - t[i - 1]);
    s[i] = (d > tol::deadband) ? 1 : (d < -tol::deadband ? -1 : 0);
  }
  return s;
}

}  // namespace detail

/// Classify the map generated by the spec over [0, tau], sampled on a grid of
/// the given size.  An ambiguous derivative pattern (neither pairing holds)
/// is reported as plain B.
inline TaxonomyLabel classify_map(const GeneratorSpec& spec, double tau,
                                  std::size_t grid) {
  if (!(tau > 0.0)) throw Error("classify_map requires tau > 0");
  const std::size_t steps = std::max<std::size_t>(grid, 16);
  const Trajectory up = propagate(spec, bloch_to_density({0, 0, 1}), tau, steps);
  const Trajectory dn = propagate(spec, bloch_to_density({0, 0, -1}), tau, steps);
  const auto& T = up.times();
  const std::size_t n = T.size();

  TaxonomyLabel label;

  // Class A test: any transverse component of the evolved +-z states.
  auto coherence = [&](double t) {
    const BlochVector a = up.bloch_at(t), b = dn.bloch_at(t);
    return std::max(std::max(std::abs(a.x), std::abs(a.y)),
                    std::max(std::abs(b.x), std::abs(b.y)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const BlochVector a = up.bloch_states()[i], b = dn.bloch_states()[i];
    const double c = std::max(std::max(std::abs(a.x), std::abs(a.y)),
                              std::max(std::abs(b.x), std::abs(b.y)));
    if (c > tol::deadband) {
      double lo = (i == 0) ? 0.0 : T[i - 1], hi = T[i];
      while (hi - lo > tol::time_bisect) {
        const double mid = 0.5 * (lo + hi);
        (coherence(mid) > tol::deadband ? hi : lo) = mid;
      }
      label.map_class = MapClass::A;
      label.formula_id = "coherence-increasing";
      label.violation_time = 0.5 * (lo + hi);
      label.g_tau = 0.5 * (up.bloch_at(tau).z - dn.bloch_at(tau).z);
      label.h_tau = 0.5 * (up.bloch_at(tau).z + dn.bloch_at(tau).z);
      return label;
    }
  }

  // z-axis components: z_up = g + h, z_dn = -g + h.
  std::vector<double> g(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double zu = up.bloch_states()[i].z, zd = dn.bloch_states()[i].z;
    g[i] = 0.5 * (zu - zd);
    h[i] = 0.5 * (zu + zd);
  }
  label.g_tau = g.back();
  label.h_tau = h.back();

  bool unital = true;
  for (double v : h) unital = unital && std::abs(v) <= tol::deadband;
  if (unital) {
    label.map_class = MapClass::D;
    label.branch = Branch::plus;
    label.formula_id = label.g_tau >= 0.0 ? "unital-gpos" : "unital-gneg";
    return label;
  }

  const auto sg = detail::derivative_signs(T, g);
  const auto sh = detail::derivative_signs(T, h);
  bool paired_same = true;    // dg >= 0 <=> dh >= 0
  bool paired_opposite = true;  // dg >= 0 <=> dh <= 0
  bool g_down = true, h_down = true, h_up = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if ((sg[i] > 0 && sh[i] < 0) || (sg[i] < 0 && sh[i] > 0)) paired_same = false;
    if ((sg[i] > 0 && sh[i] > 0) || (sg[i] < 0 && sh[i] < 0)) paired_opposite = false;
    g_down = g_down && sg[i] <= 0;
    h_down = h_down && sh[i] <= 0;
    h_up = h_up && sh[i] >= 0;
  }

  if (paired_same && g_down && h_down) {
    label.map_class = MapClass::Ciii;
    label.branch = Branch::plus;
    label.formula_id = label.g_tau >= 0.0 ? "monotone-up-gpos" : "monotone-up-gneg";
  } else if (paired_opposite && g_down && h_up) {
    label.map_class = MapClass::Civ;
    label.branch = Branch::minus;
    label.formula_id = label.g_tau >= 0.0 ? "monotone-down-gpos" : "monotone-down-gneg";
  } else if (paired_same) {
    label.map_class = MapClass::Ci;
    label.branch = Branch::plus;
    label.formula_id = "paired-up";
  } else if (paired_opposite) {
    label.map_class = MapClass::Cii;
    label.branch = Branch::minus;
    label.formula_id = "paired-down";
  } else {
    label.map_class = MapClass::B;
    label.branch = Branch::plus;
    label.formula_id = "z-axis-general";
  }
  return label;
}

/// Closed-form ratio of the labeled class from the z-axis curves and the
/// backflow value on the +-z pair.  Classes A and plain B carry no closed
/// form and are refused.
inline double taxonomy_ratio(const TaxonomyLabel& label, const SampledCurve& g,
                             const SampledCurve& h, double blp) {
  const double tau = g.t_back();
  const double g_tau = g.dense(tau);
  const double h_tau = h.dense(tau);
  const double two_n = 2.0 * blp;
  auto guarded = [](double numer, double denom) {
    if (denom < 1e-12) return 1.0;  // no evolution yet
    return numer / denom;
  };
  switch (label.map_class) {
    case MapClass::A:
      throw TaxonomyError("coherence-increasing maps have no closed-form ratio");
    case MapClass::B:
      throw TaxonomyError("unrefined z-axis maps have no closed-form ratio here");
    case MapClass::Ci: {
      const double tv_h = variation(h, tau).total;
      return guarded(1.0 - g_tau - h_tau,
                     two_n + 1.0 - std::abs(g_tau) + tv_h);
    }
    case MapClass::Cii: {
      const double tv_h = variation(h, tau).total;
      return guarded(1.0 - g_tau + h_tau,
                     two_n + 1.0 - std::abs(g_tau) + tv_h);
    }
    case MapClass::Ciii:
      if (g_tau >= 0.0)
        return guarded(1.0 - g_tau - h_tau, two_n + 1.0 - g_tau - h_tau);
      return guarded(1.0 - g_tau - h_tau, two_n + 1.0 + g_tau - h_tau);
    case MapClass::Civ:
      if (g_tau >= 0.0)
        return guarded(1.0 - g_tau + h_tau, two_n + 1.0 - g_tau + h_tau);
      return guarded(1.0 - g_tau + h_tau, two_n + 1.0 + g_tau + h_tau);
    case MapClass::D:
      return guarded(1.0 - g_tau, two_n + 1.0 - std::abs(g_tau));
  }
  throw TaxonomyError("unknown map class");
}

}  // namespace qsl
