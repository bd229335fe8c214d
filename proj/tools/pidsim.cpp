// pidsim: runs a built-in demonstration scenario or a config-file scenario
// and writes the resulting trajectory as CSV.
//
// Exit codes: 0 success, 1 configuration/validation error, 2 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pidlib/config_io.hpp"
#include "pidlib/scenario.hpp"

namespace {

struct CliOptions {
  int example_number = 0;
  std::string config_path;
  std::string out_path = "out.csv";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::vector<std::string> overrides;
  bool run_example = false;
};

/// Parses `key=value` override strings into the scenario override set.
/// Accepted keys: dt, tf, tt, sigma, duration, dumin, dumax, seed, aw.
pidlib::Overrides collect_overrides(const CliOptions& opt) {
  pidlib::Overrides ov;
  for (const std::string& item : opt.overrides) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw pidlib::ParseError(0, "override must be key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "dt") ov.dt = pidlib::detail::parse_number(value, 0);
    else if (key == "tf") ov.tf = pidlib::detail::parse_number(value, 0);
    else if (key == "tt") ov.tt = pidlib::detail::parse_number(value, 0);
    else if (key == "sigma") ov.sigma = pidlib::detail::parse_number(value, 0);
    else if (key == "duration") ov.duration = pidlib::detail::parse_number(value, 0);
    else if (key == "dumin") ov.dumin = pidlib::detail::parse_number(value, 0);
    else if (key == "dumax") ov.dumax = pidlib::detail::parse_number(value, 0);
    else if (key == "seed") ov.seed = pidlib::detail::parse_seed(value, 0);
    else if (key == "aw") ov.aw = pidlib::detail::parse_aw_token(value, 0);
    else
      throw pidlib::ParseError(0, "unknown override key '" + key + "'");
  }
  if (opt.seed) ov.seed = *opt.seed;
  if (opt.dt) ov.dt = *opt.dt;
  return ov;
}

int run(const CliOptions& opt) {
  pidlib::Scenario scenario = opt.run_example
                                  ? pidlib::example_scenario(opt.example_number)
                                  : pidlib::parse_config(opt.config_path);
  pidlib::apply_overrides(scenario, collect_overrides(opt));
  scenario.validate();
  const pidlib::Trajectory trajectory = pidlib::run_scenario(scenario);
  pidlib::write_csv(trajectory, opt.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop PID simulator: writes trajectory CSV files"};
  app.require_subcommand(1);

  CliOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out_path, "output CSV path")
        ->capture_default_str();
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { opt.seed = s; },
        "measurement-noise seed");
    sub->add_option_function<double>(
        "--dt", [&](double dt) { opt.dt = dt; }, "sample interval override");
    sub->add_option("--override", opt.overrides,
                    "parameter override key=value (dt, tf, tt, sigma, "
                    "duration, dumin, dumax, seed, aw)");
  };

  CLI::App* example = app.add_subcommand("example", "run a built-in scenario");
  example->add_option("number", opt.example_number, "scenario number (1..7)")
      ->required();
  add_common(example);

  CLI::App* run_cmd = app.add_subcommand("run", "run a config-file scenario");
  run_cmd->add_option("config", opt.config_path, "path to key=value config")
      ->required();
  add_common(run_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  opt.run_example = example->parsed();

  try {
    return run(opt);
  } catch (const pidlib::ConfigError& e) {
    std::cerr << "error [" << e.field() << "]: " << e.message() << '\n';
    return 1;
  } catch (const pidlib::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pidlib::ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pidlib::InvalidModeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const pidlib::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
