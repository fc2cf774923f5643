#pragma once

// Configuration-driven scenarios behind the command-line tool.  A scenario is
// one JSON document that fully determines a run; every resolved knob
// (including defaulted ones) is echoed into the CSV header as comments, so
// the output is self-describing.  CSV formatting is fixed: 17 significant
// digits, '.' decimal separator, '\n' line endings, one header row.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsl/generator.hpp"
#include "qsl/nonmarkov.hpp"
#include "qsl/optimality.hpp"
#include "qsl/parallel.hpp"
#include "qsl/propagation.hpp"
#include "qsl/qsl_metrics.hpp"
#include "qsl/taxonomy.hpp"
#include "qsl/version.hpp"

namespace qsl::scenario {

using nlohmann::json;

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Resolved configuration entries, echoed into the CSV header.
struct Echo {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
  }
  void add(std::string key, double value) { add(std::move(key), fmt17(value)); }
  void add(std::string key, std::size_t value) {
    add(std::move(key), std::to_string(value));
  }
};

/// Access into a JSON document that carries its field path for error
/// messages and rejects unknown keys.
class View {
 public:
  View(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->contains(key); }

  View obj(const std::string& key) const {
    const json& c = child(key);
    if (!c.is_object()) throw ConfigError(join(key) + ": expected an object");
    return View(c, join(key));
  }
  double num(const std::string& key) const {
    const json& c = child(key);
    if (!c.is_number()) throw ConfigError(join(key) + ": expected a number");
    return c.get<double>();
  }
  double num_or(const std::string& key, double fallback) const {
    return has(key) ? num(key) : fallback;
  }
  std::size_t count(const std::string& key) const {
    const json& c = child(key);
    if (!c.is_number_unsigned())
      throw ConfigError(join(key) + ": expected a nonnegative integer");
    return c.get<std::size_t>();
  }
  std::size_t count_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
  }
  std::string str(const std::string& key) const {
    const json& c = child(key);
    if (!c.is_string()) throw ConfigError(join(key) + ": expected a string");
    return c.get<std::string>();
  }
  /// A single number or an array of numbers.
  std::vector<double> num_list(const std::string& key) const {
    const json& c = child(key);
    if (c.is_number()) return {c.get<double>()};
    if (!c.is_array() || c.empty())
      throw ConfigError(join(key) + ": expected a number or a nonempty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_number())
        throw ConfigError(join(key) + "[" + std::to_string(i) +
                          "]: expected a number");
      out.push_back(c[i].get<double>());
    }
    return out;
  }
  const json& raw(const std::string& key) const { return child(key); }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& item : j_->items()) {
      bool known = false;
      for (const char* k : keys) known = known || item.key() == k;
      if (!known) throw ConfigError(join(item.key()) + ": unknown key");
    }
  }

 private:
  const json& child(const std::string& key) const {
    if (!j_->contains(key)) throw ConfigError(join(key) + ": missing");
    return (*j_)[key];
  }
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* j_;
  std::string path_;
};

namespace detail {

inline RateFunction parse_rate(const json& j, const std::string& path) {
  if (j.is_number()) return RateFunction::constant(j.get<double>());
  if (!j.is_object()) throw ConfigError(path + ": expected a number or an object");
  View v(j, path);
  const std::string type = v.str("type");
  if (type == "constant") {
    v.allow_only({"type", "value"});
    return RateFunction::constant(v.num("value"));
  }
  if (type == "jc") {
    v.allow_only({"type", "gamma0", "lambda"});
    return RateFunction::jc(v.num("gamma0"), v.num("lambda"));
  }
  if (type == "tanh") {
    v.allow_only({"type", "amplitude"});
    return RateFunction::tanh_scaled(v.num("amplitude"));
  }
  if (type == "exp_sinusoid") {
    v.allow_only(
        {"type", "amplitude", "decay", "offset", "sin_coeff", "cos_coeff",
         "frequency"});
    return RateFunction::exp_sinusoid(v.num_or("amplitude", 1.0),
                                      v.num_or("decay", 0.0), v.num_or("offset", 0.0),
                                      v.num_or("sin_coeff", 0.0),
                                      v.num_or("cos_coeff", 0.0),
                                      v.num_or("frequency", 1.0));
  }
  if (type == "tabulated") {
    v.allow_only({"type", "times", "values"});
    auto nums = [&](const char* key) {
      const json& arr = v.raw(key);
      if (!arr.is_array())
        throw ConfigError(path + "." + key + ": expected an array");
      std::vector<double> out;
      for (const auto& x : arr) out.push_back(x.get<double>());
      return out;
    };
    return RateFunction::tabulated(nums("times"), nums("values"));
  }
  throw ConfigError(path + ".type: unknown rate type '" + type + "'");
}

inline Mat2 parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(path + ": expected a 2x2 matrix of [re, im] pairs");
  cplx e[2][2];
  for (int r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2)
      throw ConfigError(path + ": expected a 2x2 matrix of [re, im] pairs");
    for (int c = 0; c < 2; ++c) {
      const json& cell = j[r][c];
      if (cell.is_number()) {
        e[r][c] = cell.get<double>();
      } else if (cell.is_array() && cell.size() == 2) {
        e[r][c] = cplx(cell[0].get<double>(), cell[1].get<double>());
      } else {
        throw ConfigError(path + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return {e[0][0], e[0][1], e[1][0], e[1][1]};
}

}  // namespace detail

/// Parse the "model" object into a generator spec, echoing every resolved
/// parameter.
inline GeneratorSpec parse_model(const View& cfg, Echo& echo) {
  const View m = cfg.obj("model");
  const std::string family = m.str("family");
  echo.add("model.family", family);
  if (family == "jaynes_cummings") {
    m.allow_only({"family", "gamma0", "lambda"});
    const double g0 = m.num("gamma0"), la = m.num("lambda");
    echo.add("model.gamma0", g0);
    echo.add("model.lambda", la);
    return JaynesCummings{g0, la};
  }
  if (family == "phase_covariant" || family == "pauli") {
    m.allow_only({"family", "gamma1", "gamma2", "gamma3", "omega"});
    RateSet rates{detail::parse_rate(m.raw("gamma1"), m.path() + ".gamma1"),
                  detail::parse_rate(m.raw("gamma2"), m.path() + ".gamma2"),
                  detail::parse_rate(m.raw("gamma3"), m.path() + ".gamma3"),
                  m.has("omega")
                      ? detail::parse_rate(m.raw("omega"), m.path() + ".omega")
                      : RateFunction::constant(0.0)};
    echo.add("model.gamma1", rates.gamma1.describe());
    echo.add("model.gamma2", rates.gamma2.describe());
    echo.add("model.gamma3", rates.gamma3.describe());
    echo.add("model.omega", rates.omega.describe());
    if (family == "pauli") return PauliChannel{std::move(rates)};
    return PhaseCovariant{std::move(rates)};
  }
  if (family == "eternal_nm") {
    m.allow_only({"family"});
    return EternalNM{};
  }
  if (family == "time_dependent") {
    m.allow_only({"family"});
    return TimeDependentModel{};
  }
  if (family == "commutative_pc") {
    m.allow_only({"family", "kappa", "gamma"});
    const double kappa = m.num("kappa");
    RateFunction gamma = detail::parse_rate(m.raw("gamma"), m.path() + ".gamma");
    echo.add("model.kappa", kappa);
    echo.add("model.gamma", gamma.describe());
    return CommutativePC{std::move(gamma), kappa};
  }
  if (family == "generic_lindblad") {
    m.allow_only({"family", "hamiltonian", "jumps"});
    const Mat2 h = m.has("hamiltonian")
                       ? detail::parse_matrix(m.raw("hamiltonian"),
                                              m.path() + ".hamiltonian")
                       : mat2_zero();
    const json& jumps = m.raw("jumps");
    if (!jumps.is_array() || jumps.empty())
      throw ConfigError(m.path() + ".jumps: expected a nonempty array");
    std::vector<JumpTerm> terms;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
      const std::string jpath = m.path() + ".jumps[" + std::to_string(i) + "]";
      View jv(jumps[i], jpath);
      jv.allow_only({"rate", "matrix"});
      terms.push_back({detail::parse_rate(jv.raw("rate"), jpath + ".rate"),
                       detail::parse_matrix(jv.raw("matrix"), jpath + ".matrix")});
    }
    echo.add("model.jumps", std::to_string(terms.size()));
    for (std::size_t i = 0; i < terms.size(); ++i)
      echo.add("model.jumps[" + std::to_string(i) + "].rate",
               terms[i].rate.describe());
    return GenericLindblad{h, std::move(terms)};
  }
  throw ConfigError(m.path() + ".family: unknown family '" + family + "'");
}

struct Overrides {
  std::optional<double> steps_per_unit;
  std::optional<std::string> output;
  unsigned threads = 1;
};

struct CommandResult {
  std::string csv;
  std::string text;         // extra human-readable output (classify)
  std::string output_path;  // resolved destination
};

namespace detail {

struct CsvBuilder {
  std::ostringstream os;

  explicit CsvBuilder(const std::string& command, const Echo& echo) {
    os << "# qsldyn " << qsl::version << "\n";
    os << "# command = " << command << "\n";
    for (const auto& [k, v] : echo.entries) os << "# " << k << " = " << v << "\n";
  }
  void comment(const std::string& line) { os << "# " << line << "\n"; }
  void header(const std::string& columns) { os << columns << "\n"; }
  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os << (i ? "," : "") << fmt17(cells[i]);
    os << "\n";
  }
  std::string str() const { return os.str(); }
};

inline double resolve_steps_per_unit(const View& cfg, const Overrides& ov,
                                     Echo& echo) {
  double spu = cfg.num_or("steps_per_unit", 2048.0);
  if (ov.steps_per_unit) spu = *ov.steps_per_unit;
  if (!(spu >= 16.0)) throw ConfigError("steps_per_unit: must be at least 16");
  echo.add("steps_per_unit", spu);
  return spu;
}

inline std::string resolve_output(const View& cfg, const Overrides& ov) {
  if (ov.output) return *ov.output;
  return cfg.str("output_path");
}

/// Positive variation of a curve at every node of a prefix grid, walking the
/// refined extrema once.
inline std::vector<double> prefix_positive_variation(const SampledCurve& c,
                                                     const std::vector<double>& ts) {
  const auto ex = locate_extrema(c, ts.back());
  std::vector<double> out(ts.size(), 0.0);
  double acc = 0.0;
  double prev_t = c.times.front();
  double prev_v = c.values.front();
  std::size_t k = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    while (k < ex.size() && ex[k] <= ts[i]) {
      const double v = c.dense(ex[k]);
      if (v > prev_v) acc += v - prev_v;
      prev_t = ex[k];
      prev_v = v;
      ++k;
    }
    const double v_end = c.dense(ts[i]);
    out[i] = acc + std::max(0.0, v_end - prev_v);
    (void)prev_t;
  }
  return out;
}

}  // namespace detail

/// Ratio vs coupling sweep of the damped JC model started from the excited
/// state: full quadrature against the closed form, plus the z-pair backflow.
inline CommandResult cmd_sweep_gamma0(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only({"model", "gamma0_grid", "tau", "steps_per_unit", "output_path"});
  Echo echo;
  const View m = cfg.obj("model");
  m.allow_only({"family", "lambda"});
  if (m.str("family") != "jaynes_cummings")
    throw ConfigError("model.family: sweep-gamma0 requires jaynes_cummings");
  const double lambda = m.num("lambda");
  echo.add("model.family", std::string("jaynes_cummings"));
  echo.add("model.lambda", lambda);

  const View grid = cfg.obj("gamma0_grid");
  grid.allow_only({"min", "max", "count"});
  const double g_min = grid.num("min"), g_max = grid.num("max");
  const std::size_t g_count = grid.count("count");
  if (!(g_min > 0.0) || !(g_max >= g_min) || g_count < 2)
    throw ConfigError("gamma0_grid: need 0 < min <= max and count >= 2");
  echo.add("gamma0_grid.min", g_min);
  echo.add("gamma0_grid.max", g_max);
  echo.add("gamma0_grid.count", g_count);

  const std::vector<double> taus = cfg.num_list("tau");
  for (std::size_t i = 0; i < taus.size(); ++i)
    echo.add("tau[" + std::to_string(i) + "]", taus[i]);
  const double spu = detail::resolve_steps_per_unit(cfg, ov, echo);

  struct Row {
    double gamma0, tau, quad, closed, backflow;
    bool critical;
  };
  std::vector<Row> rows(g_count * taus.size());
  parallel_for(rows.size(), ov.threads, [&](std::size_t k) {
    const std::size_t ig = k / taus.size();
    const double gamma0 =
        g_min + (g_max - g_min) * static_cast<double>(ig) /
                    static_cast<double>(g_count - 1);
    const double tau = taus[k % taus.size()];
    const JaynesCummings jc{gamma0, lambda};
    const double quad =
        qsl_time(jc, PureState(1.0), tau, default_steps(tau, spu)).ratio;
    rows[k] = {gamma0,
               tau,
               quad,
               qsl_ratio_jc_closed(tau, gamma0, lambda),
               blp_jc_analytic(tau, gamma0, lambda),
               std::abs(gamma0 - jc_critical_gamma0(lambda)) <= 1e-12};
  });

  detail::CsvBuilder csv("sweep-gamma0", echo);
  csv.comment("backflow column: trace-distance backflow on the +-z pair (closed form)");
  csv.comment("critical column: 1 on the gamma0 = lambda/2 row");
  csv.header("gamma0,tau,ratio_quadrature,ratio_closed_form,blp,critical");
  double worst_gap = 0.0;
  for (const auto& r : rows) {
    worst_gap = std::max(worst_gap, std::abs(r.quad - r.closed));
    csv.row({r.gamma0, r.tau, r.quad, r.closed, r.backflow, r.critical ? 1.0 : 0.0});
  }
  if (worst_gap > 1e-6)
    throw NumericsError("sweep-gamma0 self-check failed: closed form and "
                        "quadrature disagree by " +
                        fmt17(worst_gap));
  return {csv.str(), "", detail::resolve_output(cfg, ov)};
}

/// Ratio over the (tau', a) grid for any model family.
inline CommandResult cmd_state_scan(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only(
      {"model", "tau", "tau_grid", "a_grid", "theta", "steps_per_unit",
       "output_path"});
  Echo echo;
  const GeneratorSpec spec = parse_model(cfg, echo);
  const double tau = cfg.num("tau");
  if (!(tau > 0.0)) throw ConfigError("tau: must be positive");
  const std::size_t tau_grid = cfg.count_or("tau_grid", 64);
  const std::size_t a_grid = cfg.count_or("a_grid", 101);
  const double theta = cfg.num_or("theta", 0.0);
  if (tau_grid < 2 || a_grid < 2)
    throw ConfigError("tau_grid/a_grid: need at least 2 points");
  echo.add("tau", tau);
  echo.add("tau_grid", tau_grid);
  echo.add("a_grid", a_grid);
  echo.add("theta", theta);
  const double spu = detail::resolve_steps_per_unit(cfg, ov, echo);

  const std::size_t steps = default_steps(tau, spu);
  std::vector<std::size_t> idx(tau_grid);
  for (std::size_t k = 0; k < tau_grid; ++k) idx[k] = ((k + 1) * steps) / tau_grid;

  std::vector<std::vector<double>> ratios(a_grid);
  parallel_for(a_grid, ov.threads, [&](std::size_t ia) {
    const double a = static_cast<double>(ia) / static_cast<double>(a_grid - 1);
    const PureState psi0(a, theta);
    const Trajectory traj = propagate(spec, psi0.density(), tau, steps);
    ratios[ia] = prefix_ratios(traj, integrate_generator_norms(traj), idx);
  });

  detail::CsvBuilder csv("state-scan", echo);
  csv.header("tau,a,ratio,optimal_flag");
  for (std::size_t ia = 0; ia < a_grid; ++ia) {
    const double a = static_cast<double>(ia) / static_cast<double>(a_grid - 1);
    for (std::size_t k = 0; k < tau_grid; ++k) {
      const double r = ratios[ia][k];
      if (r > 1.0 + 1e-9)
        throw PhysicsError("state-scan: ratio exceeded 1 beyond tolerance");
      const double t = tau * static_cast<double>(idx[k]) / static_cast<double>(steps);
      csv.row({t, a, r, r >= 1.0 - tol::ratio_flag ? 1.0 : 0.0});
    }
  }
  return {csv.str(), "", detail::resolve_output(cfg, ov)};
}

/// Rate-space trajectory of a phase-covariant model with the three
/// non-Markovianity boundary values and their crossing times.
inline CommandResult cmd_region_trajectory(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only({"model", "t_max", "t_grid", "output_path"});
  Echo echo;
  const GeneratorSpec spec = parse_model(cfg, echo);
  const auto rates = phase_covariant_rates(spec);
  if (!rates)
    throw ConfigError("model.family: region-trajectory needs a phase-covariant form");
  const double t_max = cfg.num("t_max");
  if (!(t_max > 0.0)) throw ConfigError("t_max: must be positive");
  const std::size_t t_grid = cfg.count_or("t_grid", 600);
  if (t_grid < 8) throw ConfigError("t_grid: need at least 8 points");
  echo.add("t_max", t_max);
  echo.add("t_grid", t_grid);

  const auto crossings = region_boundary_crossings(*rates, t_max);
  detail::CsvBuilder csv("region-trajectory", echo);
  auto list_comment = [&](const char* name, const std::vector<double>& ts) {
    std::string line = std::string("crossings.") + name + " =";
    for (double t : ts) line += " " + fmt17(t);
    csv.comment(line);
  };
  list_comment("blp_boundary", crossings.blp);
  list_comment("secondary_boundary", crossings.secondary);
  list_comment("semigroup_boundary", crossings.semigroup);
  list_comment("all", crossings.all);
  csv.header(
      "t,gamma_prime,gamma3,blp_boundary,secondary_boundary,semigroup_boundary");
  for (std::size_t i = 0; i <= t_grid; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(t_grid);
    const auto flags = pc_blp_criterion(*rates, t);
    csv.row({t, flags.semigroup_boundary, rates->gamma3(t), flags.blp_boundary,
             flags.secondary_boundary, flags.semigroup_boundary});
  }
  return {csv.str(), "", detail::resolve_output(cfg, ov)};
}

/// Classify the map and compare its class formula against the quadrature
/// pipeline along the horizon.
inline CommandResult cmd_classify(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only({"model", "tau", "rows", "steps_per_unit", "output_path"});
  Echo echo;
  const GeneratorSpec spec = parse_model(cfg, echo);
  const double tau = cfg.num("tau");
  if (!(tau > 0.0)) throw ConfigError("tau: must be positive");
  const std::size_t rows = cfg.count_or("rows", 128);
  if (rows < 2) throw ConfigError("rows: need at least 2");
  echo.add("tau", tau);
  echo.add("rows", rows);
  const double spu = detail::resolve_steps_per_unit(cfg, ov, echo);
  const std::size_t steps = default_steps(tau, spu);

  const TaxonomyLabel label = classify_map(spec, tau, steps);
  const bool has_formula =
      label.map_class != MapClass::A && label.map_class != MapClass::B;

  std::ostringstream text;
  text << "class = " << to_string(label.map_class) << "\n";
  text << "branch = " << (label.branch == Branch::plus ? "+1" : "-1") << "\n";
  text << "formula = " << label.formula_id << "\n";
  text << "g_tau = " << fmt17(label.g_tau) << "\n";
  text << "h_tau = " << fmt17(label.h_tau) << "\n";
  if (label.map_class == MapClass::A)
    text << "violation_time = " << fmt17(label.violation_time) << "\n";

  Echo more = echo;
  more.add("class", to_string(label.map_class));
  more.add("branch", std::string(label.branch == Branch::plus ? "+1" : "-1"));
  more.add("formula", label.formula_id);
  detail::CsvBuilder csv("classify", more);
  csv.header("t,g,h,ratio_formula,ratio_pipeline,abs_gap");

  // shared grid machinery for the per-row values
  const auto map = extract_affine_map(spec, tau, steps);
  const auto g_curve = map.g_curve();
  const auto h_curve = map.h_curve();
  const double a0 = label.branch == Branch::plus ? 1.0 : 0.0;
  const PureState psi0(a0);
  const Trajectory traj = propagate(spec, psi0.density(), tau, steps);
  const auto norms = integrate_generator_norms(traj);

  std::vector<std::size_t> idx(rows);
  for (std::size_t k = 0; k < rows; ++k) idx[k] = ((k + 1) * steps) / rows;
  const auto pipeline = prefix_ratios(traj, norms, idx);

  std::vector<double> ts(rows);
  for (std::size_t k = 0; k < rows; ++k)
    ts[k] = tau * static_cast<double>(idx[k]) / static_cast<double>(steps);

  std::vector<double> backflow;
  std::vector<double> tv_h;
  if (has_formula) {
    // backflow on the +-z pair: rises of |g| for these diagonal maps
    SampledCurve abs_g = g_curve;
    for (auto& v : abs_g.values) v = std::abs(v);
    abs_g.dense = [inner = g_curve.dense](double t) { return std::abs(inner(t)); };
    backflow = detail::prefix_positive_variation(abs_g, ts);
    SampledCurve h_copy = h_curve;
    auto h_rises = detail::prefix_positive_variation(h_copy, ts);
    SampledCurve neg_h = h_curve;
    for (auto& v : neg_h.values) v = -v;
    neg_h.dense = [inner = h_curve.dense](double t) { return -inner(t); };
    auto h_falls = detail::prefix_positive_variation(neg_h, ts);
    tv_h.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) tv_h[k] = h_rises[k] + h_falls[k];
  }

  double worst_gap = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    const double g_t = g_curve.dense(ts[k]);
    const double h_t = h_curve.dense(ts[k]);
    double formula = std::nan("");
    double gap = std::nan("");
    if (has_formula) {
      const double two_n = 2.0 * backflow[k];
      double numer = 0.0, denom = 0.0;
      switch (label.map_class) {
        case MapClass::Ci:
          numer = 1.0 - g_t - h_t;
          denom = two_n + 1.0 - std::abs(g_t) + tv_h[k];
          break;
        case MapClass::Cii:
          numer = 1.0 - g_t + h_t;
          denom = two_n + 1.0 - std::abs(g_t) + tv_h[k];
          break;
        case MapClass::Ciii:
          numer = 1.0 - g_t - h_t;
          denom = two_n + 1.0 + (g_t >= 0.0 ? -g_t : g_t) - h_t;
          break;
        case MapClass::Civ:
          numer = 1.0 - g_t + h_t;
          denom = two_n + 1.0 + (g_t >= 0.0 ? -g_t : g_t) + h_t;
          break;
        default:  // D
          numer = 1.0 - g_t;
          denom = two_n + 1.0 - std::abs(g_t);
          break;
      }
      formula = denom < 1e-12 ? 1.0 : numer / denom;  // no evolution yet
      gap = std::abs(formula - pipeline[k]);
      worst_gap = std::max(worst_gap, gap);
    }
    csv.row({ts[k], g_t, h_t, formula, pipeline[k], gap});
  }
  if (has_formula && worst_gap > 1e-6)
    throw NumericsError("classify self-check failed: formula and pipeline "
                        "disagree by " +
                        fmt17(worst_gap));
  return {csv.str(), text.str(), detail::resolve_output(cfg, ov)};
}

/// Trace-distance non-Markovianity with the antipodal pair search.
inline CommandResult cmd_blp(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only({"model", "tau", "pair_search_resolution", "steps_per_unit",
                  "output_path"});
  Echo echo;
  const GeneratorSpec spec = parse_model(cfg, echo);
  const std::vector<double> taus = cfg.num_list("tau");
  const int resolution =
      static_cast<int>(cfg.count_or("pair_search_resolution", 144));
  for (std::size_t i = 0; i < taus.size(); ++i)
    echo.add("tau[" + std::to_string(i) + "]", taus[i]);
  echo.add("pair_search_resolution", static_cast<std::size_t>(resolution));
  const double spu = detail::resolve_steps_per_unit(cfg, ov, echo);

  detail::CsvBuilder csv("blp", echo);
  csv.header("tau,blp,n_x,n_y,n_z");
  for (double tau : taus) {
    if (!(tau > 0.0)) throw ConfigError("tau: must be positive");
    BLPOptions opts;
    opts.resolution = resolution;
    opts.steps_per_unit = spu;
    opts.threads = ov.threads;
    const auto res = blp_measure(spec, tau, opts);
    // the search must dominate the coordinate-axis pairs it probed
    const std::size_t steps = default_steps(tau, spu);
    for (const BlochVector& n :
         {BlochVector{1, 0, 0}, BlochVector{0, 1, 0}, BlochVector{0, 0, 1}}) {
      const double fixed = blp_pair(spec, n, -n, tau, steps);
      if (res.value < fixed - 1e-6)
        throw NumericsError("blp self-check failed: pair search fell below a "
                            "fixed axis pair");
    }
    csv.row({tau, res.value, res.r1.x, res.r1.y, res.r1.z});
  }
  return {csv.str(), "", detail::resolve_output(cfg, ov)};
}

/// Speed-limit summary for one initial state over a list of horizons.
inline CommandResult cmd_qsl(const json& config, const Overrides& ov) {
  View cfg(config, "");
  cfg.allow_only({"model", "initial_state", "tau", "steps_per_unit", "output_path"});
  Echo echo;
  const GeneratorSpec spec = parse_model(cfg, echo);
  const View st = cfg.obj("initial_state");
  st.allow_only({"a", "theta"});
  const double a = st.num("a");
  const double theta = st.num_or("theta", 0.0);
  echo.add("initial_state.a", a);
  echo.add("initial_state.theta", theta);
  const std::vector<double> taus = cfg.num_list("tau");
  for (std::size_t i = 0; i < taus.size(); ++i)
    echo.add("tau[" + std::to_string(i) + "]", taus[i]);
  const double spu = detail::resolve_steps_per_unit(cfg, ov, echo);

  const PureState psi0(a, theta);
  std::vector<QSLResult> results(taus.size());
  parallel_for(taus.size(), ov.threads, [&](std::size_t i) {
    results[i] = qsl_time(spec, psi0, taus[i], default_steps(taus[i], spu));
  });

  detail::CsvBuilder csv("qsl", echo);
  csv.header(
      "tau,a,theta,lambda_op,lambda_tr,lambda_hs,bures,tau_qsl,ratio,revivals");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto& r = results[i];
    if (r.ratio > 1.0 + 1e-9)
      throw PhysicsError("qsl: ratio exceeded 1 beyond tolerance");
    csv.row({taus[i], a, theta, r.lambda_op, r.lambda_tr, r.lambda_hs, r.bures,
             r.tau_qsl, r.ratio, r.revivals_f});
  }
  return {csv.str(), "", detail::resolve_output(cfg, ov)};
}

inline CommandResult run_command(const std::string& name, const json& config,
                                 const Overrides& ov) {
  if (name == "sweep-gamma0") return cmd_sweep_gamma0(config, ov);
  if (name == "state-scan") return cmd_state_scan(config, ov);
  if (name == "region-trajectory") return cmd_region_trajectory(config, ov);
  if (name == "classify") return cmd_classify(config, ov);
  if (name == "blp") return cmd_blp(config, ov);
  if (name == "qsl") return cmd_qsl(config, ov);
  throw ConfigError("unknown command: " + name);
}

}  // namespace qsl::scenario
