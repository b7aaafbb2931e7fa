#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "probwave/cli/config.hpp"
#include "probwave/cli/output.hpp"
#include "probwave/cli/scenarios.hpp"
#include "probwave/errors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kCheckFailed = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace probwave;
  using namespace probwave::cli;

  CLI::App app{"probwave scenario runner"};
  std::string scenario;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  bool check = false;
  bool list = false;
  app.add_option("--scenario", scenario, "Scenario to run");
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--check", check, "Exit with status 3 when any check fails");
  app.add_flag("--list", list, "Print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (list) {
    for (auto name : scenario_names()) std::cout << name << '\n';
    return kOk;
  }

  try {
    if (config_path.empty() && scenario.empty()) {
      throw ConfigError("give --scenario or --config");
    }
    ScenarioConfig config =
        config_path.empty() ? default_config(scenario) : load_config(config_path, scenario);
    if (out) config.out = *out;
    if (seed) config.seed = *seed;
    if (format) config.format = parse_format(*format);
    config.check = check;

    const ScenarioResult result = run_scenario(config);
    write_outputs(result, config);

    for (const auto& c : result.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
    }
    if (check && !result.all_passed()) return kCheckFailed;
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const RegionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
