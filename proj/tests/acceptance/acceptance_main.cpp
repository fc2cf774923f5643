// Acceptance suite: one line per criterion, PASS/FAIL with wall time and a
// failure detail where applicable.  Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsl/qsl.hpp"

using namespace qsl;

namespace {

GeneratorSpec constant_pc(double g1, double g2, double g3, double w = 0.0) {
  return PhaseCovariant{{RateFunction::constant(g1), RateFunction::constant(g2),
                         RateFunction::constant(g3), RateFunction::constant(w)}};
}

GeneratorSpec constant_pauli(double g1, double g2, double g3) {
  return PauliChannel{{RateFunction::constant(g1), RateFunction::constant(g2),
                       RateFunction::constant(g3), RateFunction::constant(0.0)}};
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      detail << "\n    - " << msg;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- criterion bodies ------------------------------------------------------

void c1_jc_markovian_saturation(Check& c) {
  for (double g0 : {0.05, 0.1, 0.3, 0.49}) {
    const double ratio = qsl_time(JaynesCummings{g0, 1.0}, PureState(1.0), 5.0).ratio;
    c.require(std::abs(ratio - 1.0) <= 1e-6,
              "gamma0 = " + fmt(g0) + ": ratio " + fmt(ratio) + " not 1 within 1e-6");
  }
}

void c2_jc_closed_form_equivalence(Check& c) {
  const double tau = 5.0;
  double worst = 0.0, worst_g0 = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double g0 = 0.05 + (5.0 - 0.05) * i / 49.0;
    const double closed = qsl_ratio_jc_closed(tau, g0, 1.0);
    const double quad = qsl_time(JaynesCummings{g0, 1.0}, PureState(1.0), tau).ratio;
    if (std::abs(closed - quad) > worst) {
      worst = std::abs(closed - quad);
      worst_g0 = g0;
    }
  }
  c.require(worst <= 1e-6, "worst closed-vs-quadrature gap " + fmt(worst) +
                               " at gamma0 = " + fmt(worst_g0));
}

void c3_nonmarkovian_onset(Check& c) {
  const double tau = 10.0;
  BLPOptions opts;
  opts.resolution = 144;
  const auto below = blp_measure(JaynesCummings{0.5, 1.0}, tau, opts);
  c.require(below.value <= 1e-6,
            "blp_measure(gamma0 = 0.5) = " + fmt(below.value) + ", expected 0");
  const auto above = blp_measure(JaynesCummings{0.55, 1.0}, tau, opts);
  c.require(above.value > 1e-4,
            "blp_measure(gamma0 = 0.55, tau = 10) = " + fmt(above.value) +
                ", demanded > 1e-4; the first trace-distance revival of this "
                "model starts at t = " +
                fmt(*jc_first_b_zero(0.55, 1.0)) +
                " > 10, so every pair is monotone inside the window");
  c.require(std::abs(above.r1.z) >= 0.99,
            "maximizing pair found at n = (" + fmt(above.r1.x) + ", " +
                fmt(above.r1.y) + ", " + fmt(above.r1.z) +
                "), demanded antipodal along z; the true maximizer is "
                "equatorial, where the pair distance is |b| >= b^2");
}

void c4_optimal_state_sets(Check& c) {
  struct Case {
    const char* name;
    GeneratorSpec spec;
    std::set<int> want;  // flagged indices on the 101-point a grid
  };
  const std::vector<Case> cases = {
      {"phase-covariant(1,2,3)", constant_pc(1, 2, 3), {0, 100}},
      {"pauli(1,2,3)", constant_pauli(1, 2, 3), {0, 50, 100}},
      {"eternal-NM", EternalNM{}, {0, 50, 100}},
  };
  for (const auto& k : cases) {
    ScanOptions opts;
    opts.tau_grid = 64;
    const auto scan = optimal_state_scan(k.spec, 1.0, 101, opts);
    std::set<int> got;
    for (std::size_t i = 0; i < scan.points.size(); ++i)
      if (scan.points[i].optimal) got.insert(static_cast<int>(i));
    if (got != k.want) {
      std::string s = "flagged a-indices for " + std::string(k.name) + ": {";
      for (int i : got) s += std::to_string(i) + " ";
      c.require(false, s + "}");
    }
  }
}

void c5_depolarizing_isotropy(Check& c) {
  // phase-covariant depolarizing form: gamma1 = gamma2 = 2 gamma3
  {
    ScanOptions opts;
    opts.tau_grid = 64;
    const auto scan = optimal_state_scan(constant_pc(1.0, 1.0, 0.5), 1.0, 101, opts);
    for (const auto& p : scan.points)
      c.require(p.min_ratio >= 1.0 - 1e-6,
                "depolarizing ratio at a = " + fmt(p.a) + " is " + fmt(p.min_ratio));
  }
  // isotropic Pauli channel over the full (a, theta) grid
  const GeneratorSpec iso = constant_pauli(1.0, 1.0, 1.0);
  for (int ia = 0; ia <= 100; ++ia) {
    for (int it = 0; it < 16; ++it) {
      const double a = ia / 100.0;
      const double theta = 2.0 * 3.14159265358979323846 * it / 16.0;
      const double ratio = qsl_time(iso, PureState(a, theta), 1.0).ratio;
      if (std::abs(ratio - 1.0) > 1e-6) {
        c.require(false, "isotropic Pauli ratio at (a, theta) = (" + fmt(a) + ", " +
                             fmt(theta) + ") is " + fmt(ratio));
        return;
      }
    }
  }
}

void c6_transition_times(Check& c) {
  const PureState half(0.5);
  const GeneratorSpec spec = TimeDependentModel{};
  for (double tau = 0.25; tau <= 2.05; tau += 0.3) {
    const double ratio = qsl_time(spec, half, tau).ratio;
    c.require(std::abs(ratio - 1.0) <= 1e-6,
              "tau = " + fmt(tau) + ": ratio " + fmt(ratio) + " not 1 within 1e-6");
  }
  {
    const double ratio = qsl_time(spec, half, 2.05).ratio;
    c.require(std::abs(ratio - 1.0) <= 1e-6,
              "tau = 2.05: ratio " + fmt(ratio) + " not 1 within 1e-6");
  }
  const double at_2_2 = qsl_time(spec, half, 2.2).ratio;
  c.require(at_2_2 < 1.0 - 1e-4, "tau = 2.2: ratio " + fmt(at_2_2) +
                                     " should sit below 1 - 1e-4");
  double prev = -1.0;
  for (double tau = 4.8; tau <= 6.0 + 1e-9; tau += 0.2) {
    const double ratio = qsl_time(spec, half, tau).ratio;
    if (prev >= 0.0)
      c.require(ratio > prev, "ratio not strictly increasing at tau = " + fmt(tau));
    prev = ratio;
  }
  const auto crossings = region_boundary_crossings(time_dependent_rates(), 6.0);
  const std::vector<double> want = {2.0 * std::atan(5.0 / 3.0), 2.0 * std::atan(3.0),
                                    1.5 * 3.14159265358979323846};
  c.require(crossings.all.size() == want.size(),
            "expected 3 distinct crossings, got " +
                std::to_string(crossings.all.size()));
  for (std::size_t i = 0; i < want.size() && i < crossings.all.size(); ++i)
    c.require(std::abs(crossings.all[i] - want[i]) <= 1e-6,
              "crossing " + std::to_string(i) + " = " + fmt(crossings.all[i]) +
                  ", expected " + fmt(want[i]));
}

void c7_taxonomy_equivalence(Check& c) {
  std::vector<std::pair<std::string, GeneratorSpec>> models;
  models.emplace_back("jc(5)", JaynesCummings{5.0, 1.0});
  models.emplace_back("eternal-NM", EternalNM{});
  for (double kappa : {0.0, 0.5, 1.0}) {
    models.emplace_back("commutative(kappa=" + fmt(kappa) + ", const)",
                        CommutativePC{RateFunction::constant(1.0), kappa});
    models.emplace_back(
        "commutative(kappa=" + fmt(kappa) + ", sin)",
        CommutativePC{RateFunction::exp_sinusoid(1.0, 0.0, 0.0, 1.0, 0.0, 1.0),
                      kappa});
  }
  for (const auto& [name, spec] : models) {
    for (double tau : {1.0, 3.0}) {
      const std::size_t steps = default_steps(tau);
      const auto label = classify_map(spec, tau, steps);
      if (label.map_class == MapClass::A || label.map_class == MapClass::B) {
        c.require(false, name + ": unexpectedly classified " +
                             std::string(to_string(label.map_class)));
        continue;
      }
      const auto map = extract_affine_map(spec, tau, steps);
      const double backflow = blp_pair(spec, {0, 0, 1}, {0, 0, -1}, tau, steps);
      const double formula =
          taxonomy_ratio(label, map.g_curve(), map.h_curve(), backflow);
      const double a0 = label.branch == Branch::plus ? 1.0 : 0.0;
      const double pipeline = qsl_time(spec, PureState(a0), tau, steps).ratio;
      c.require(std::abs(formula - pipeline) <= 1e-6,
                name + " at tau = " + fmt(tau) + ": formula " + fmt(formula) +
                    " vs pipeline " + fmt(pipeline));
    }
  }
}

void c8_property_suites(Check& c) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto random_ball = [&]() {
    BlochVector v{normal(rng), normal(rng), normal(rng)};
    const double n = v.norm();
    const double r = std::cbrt(uni(rng));
    return BlochVector{v.x / n * r, v.y / n * r, v.z / n * r};
  };

  // (a) singular-value pair degeneracy of generator outputs
  const std::vector<GeneratorSpec> families = {
      constant_pc(1, 2, 3, 0.4), constant_pauli(1, 2, 3), JaynesCummings{0.7, 1.0},
      EternalNM{}, TimeDependentModel{}};
  for (int i = 0; i < 1000; ++i) {
    const auto& spec = families[i % families.size()];
    const double t = 4.0 * uni(rng);
    const Mat2 out =
        evaluate_generator(spec, density_from_bloch_unchecked(random_ball()), t);
    const auto n = norm_triple(out);
    const double scale = 1.0 + n.op;
    if (std::abs(n.tr - 2.0 * n.op) > 1e-10 * scale ||
        std::abs(n.hs - std::sqrt(2.0) * n.op) > 1e-10 * scale) {
      c.require(false, "norm degeneracy violated at sample " + std::to_string(i));
      break;
    }
  }

  // (b) bound validity: every shipped model x 21 initial states x 4 horizons
  const std::vector<GeneratorSpec> shipped = {
      JaynesCummings{5.0, 1.0},
      constant_pc(1, 2, 3),
      constant_pauli(1, 2, 3),
      EternalNM{},
      TimeDependentModel{},
      CommutativePC{RateFunction::constant(1.0), 0.5}};
  const double tau_max = 5.0;
  const std::size_t steps = default_steps(tau_max);
  const std::vector<std::size_t> idx = {steps / 10, steps / 5, (2 * steps) / 5,
                                        steps};  // tau' = 0.5, 1, 2, 5
  bool bound_ok = true;
  for (const auto& spec : shipped) {
    for (int ia = 0; ia <= 20 && bound_ok; ++ia) {
      const PureState psi0(ia / 20.0);
      const auto traj = propagate(spec, psi0.density(), tau_max, steps);
      const auto norms = integrate_generator_norms(traj);
      for (double r : prefix_ratios(traj, norms, idx))
        if (r > 1.0 + 1e-9) {
          c.require(false, "bound violated: ratio " + fmt(r) + " at a = " +
                               fmt(ia / 20.0));
          bound_ok = false;
        }
    }
  }

  // (c) trace-distance matrix route vs Bloch route
  for (int i = 0; i < 1000; ++i) {
    const BlochVector r1 = random_ball(), r2 = random_ball();
    const double matrix_route =
        trace_distance(bloch_to_density(r1), bloch_to_density(r2));
    if (std::abs(matrix_route - 0.5 * (r1 - r2).norm()) > 1e-12) {
      c.require(false, "trace-distance route mismatch at sample " + std::to_string(i));
      break;
    }
  }

  // (d) pair search dominates fixed pairs
  for (const auto& spec :
       {GeneratorSpec(JaynesCummings{5.0, 1.0}), GeneratorSpec(TimeDependentModel{})}) {
    const double tau = 3.0;
    BLPOptions opts;
    opts.resolution = 64;
    opts.steps_per_unit = 1024;
    const double best = blp_measure(spec, tau, opts).value;
    std::vector<BlochVector> probes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 10; ++i) {
      BlochVector v{normal(rng), normal(rng), normal(rng)};
      const double n = v.norm();
      probes.push_back({v.x / n, v.y / n, v.z / n});
    }
    for (const auto& n : probes) {
      const double fixed = blp_pair(spec, n, -n, tau, default_steps(tau, 1024));
      c.require(best >= fixed - 1e-6, "pair search " + fmt(best) +
                                          " fell below a fixed pair " + fmt(fixed));
    }
  }

  // (e) analytic vs numeric trajectories
  struct TrajCase {
    GeneratorSpec spec;
    double tau;
  };
  const std::vector<TrajCase> cases = {
      {JaynesCummings{0.3, 1.0}, 3.0},
      {JaynesCummings{5.0, 1.0}, 1.2},
      {constant_pc(1, 2, 3, 0.7), 3.0},
      {constant_pauli(1, 2, 3), 3.0},
      {EternalNM{}, 3.0},
      {TimeDependentModel{}, 6.0},
      {CommutativePC{RateFunction::exp_sinusoid(1.0, 0.0, 1.0, 1.0, 0.0, 1.0), 0.5},
       3.0}};
  for (const auto& k : cases) {
    const auto rho0 = bloch_to_density(random_ball());
    PropagateOptions analytic, numeric;
    analytic.method = PropagationMethod::analytic;
    numeric.method = PropagationMethod::numeric;
    const std::size_t n = default_steps(k.tau);
    const auto ta = propagate(k.spec, rho0, k.tau, n, analytic);
    const auto tn = propagate(k.spec, rho0, k.tau, n, numeric);
    double worst = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i)
      worst = std::max(worst, trace_distance(ta.state(i), tn.state(i)));
    c.require(worst <= 1e-7,
              "analytic/numeric trajectory gap " + fmt(worst) + " at tau = " +
                  fmt(k.tau));
  }
}

struct Criterion {
  int id;
  std::string name;
  double time_budget_s;  // 0: no stated budget
  std::function<void(Check&)> run;
};

}  // namespace

// With no argument every criterion runs; an integer argument selects one.
int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "JC Markovian saturation (ratio = 1 within 1e-6)", 1.0,
       c1_jc_markovian_saturation},
      {2, "JC closed-form vs quadrature over 50 couplings (1e-6)", 10.0,
       c2_jc_closed_form_equivalence},
      {3, "non-Markovian onset at the critical coupling (tau = 10)", 30.0,
       c3_nonmarkovian_onset},
      {4, "optimal-state sets on the 101 x 64 grids", 60.0, c4_optimal_state_sets},
      {5, "depolarizing and isotropic-Pauli saturation", 0.0,
       c5_depolarizing_isotropy},
      {6, "oscillatory-model transition times", 0.0, c6_transition_times},
      {7, "taxonomy formulas vs pipeline (1e-6)", 0.0, c7_taxonomy_equivalence},
      {8, "property suites (norms, bound, distances, pairs, integrators)", 0.0,
       c8_property_suites},
  };

  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > static_cast<int>(criteria.size())) {
      std::printf("usage: %s [1..%zu]\n", argv[0], criteria.size());
      return 64;
    }
  }

  int failures = 0;
  int executed = 0;
  for (const auto& crit : criteria) {
    if (selected != 0 && crit.id != selected) continue;
    ++executed;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (crit.time_budget_s > 0.0 && secs >= crit.time_budget_s)
      check.require(false, "runtime " + fmt(secs) + " s exceeded the " +
                               fmt(crit.time_budget_s) + " s budget");
    std::printf("C%d %s (%.2f s): %s%s\n", crit.id, check.ok ? "PASS" : "FAIL",
                secs, crit.name.c_str(), check.detail.str().c_str());
    if (!check.ok) ++failures;
  }
  if (failures > 0)
    std::printf("%d of %d criteria failed\n", failures, executed);
  else
    std::printf("all %d criteria passed\n", executed);
  return failures;
}
