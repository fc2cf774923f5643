// qsl-lab: configuration-driven front end for the open-qubit speed-limit
// laboratory.  Every subcommand reads one JSON scenario file and writes one
// deterministic CSV table; plotting is left to external tools.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-gate failure,
// 4 physics-invariant violation, 1 anything else.

#include <clocale>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsl/scenario.hpp"

namespace {

struct Args {
  std::string config_path;
  std::optional<std::string> output;
  std::optional<double> steps_per_unit;
  unsigned threads = 1;
};

int run(const std::string& command, const Args& args) {
  std::ifstream in(args.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file '" << args.config_path << "'\n";
    return 2;
  }
  nlohmann::json config;
  try {
    in >> config;
  } catch (const std::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return 2;
  }

  qsl::scenario::Overrides ov;
  ov.output = args.output;
  ov.steps_per_unit = args.steps_per_unit;
  ov.threads = args.threads;

  try {
    const auto result = qsl::scenario::run_command(command, config, ov);
    if (!result.text.empty()) std::cout << result.text;
    std::ofstream out(result.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << result.output_path << "'\n";
      return 1;
    }
    out << result.csv;
    std::cerr << "wrote " << result.output_path << "\n";
    return 0;
  } catch (const qsl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qsl::NumericsError& e) {
    std::cerr << "numerical gate: " << e.what() << "\n";
    return 3;
  } catch (const qsl::PhysicsError& e) {
    std::cerr << "physics invariant: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");

  CLI::App app{"open-qubit speed-limit laboratory"};
  app.require_subcommand(1);

  Args args;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"sweep-gamma0", "JC ratio vs coupling: quadrature, closed form, backflow"},
      {"state-scan", "ratio over the (tau, a) grid with optimal-state flags"},
      {"region-trajectory", "rate-space boundary values and crossing times"},
      {"classify", "map taxonomy with class formula vs pipeline"},
      {"blp", "trace-distance non-Markovianity via antipodal pair search"},
      {"qsl", "speed-limit summary for one initial state"},
  };

  std::string chosen;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", args.config_path, "scenario JSON file")
        ->required();
    sub->add_option("--output", args.output, "override the configured output path");
    sub->add_option("--steps", args.steps_per_unit,
                    "override steps per unit time (>= 16)");
    sub->add_option("--threads", args.threads, "worker threads (0 = auto)");
    sub->callback([&chosen, name = std::string(c.name)] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run(chosen, args);
}
