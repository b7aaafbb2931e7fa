#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "probwave/core.hpp"

namespace probwave::cli {

/// Bad config file, unknown scenario or key, or a value of the wrong type.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat f);

/// Key-value parameters of one scenario section.
///
/// Every getter records the resolved value (default or given), so that the
/// report can list the exact inputs of a run. finish() rejects keys that no
/// getter asked for.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  double number(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key, std::int64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  /// Comma- or whitespace-separated numbers.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  /// Throws ConfigError naming the first key that was never read.
  void finish(const std::string& section) const;

  const nlohmann::ordered_json& resolved() const { return resolved_; }

 private:
  const std::string* raw(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  nlohmann::ordered_json resolved_ = nlohmann::ordered_json::object();
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out = "out";
  OutputFormat format = OutputFormat::Csv;
  bool check = false;
  PhysicalConstants constants{};
  Params params;
};

/// Reads an INI file. [run] may hold scenario, seed, out and format;
/// [constants] holds hbar, mass and k_boltzmann; the section named after
/// the scenario holds its parameters. `scenario_override` picks the section
/// when the command line names the scenario.
ScenarioConfig load_config(const std::string& path, const std::string& scenario_override = "");

/// Config with defaults only.
ScenarioConfig default_config(const std::string& scenario);

}  // namespace probwave::cli
