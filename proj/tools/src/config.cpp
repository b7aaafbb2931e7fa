#include "probwave/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <sstream>

namespace probwave::cli {
namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double v = 0.0;
  std::string rest;
  if (!(in >> v) || (in >> rest)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> section(const pt::ptree& tree, const std::string& name) {
  std::map<std::string, std::string> out;
  const auto child = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
  if (!child) return out;
  for (const auto& [key, node] : *child) out[key] = trim(node.data());
  return out;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("format must be csv or json, got '" + name + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

const std::string* Params::raw(const std::string& key) {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

double Params::number(const std::string& key, double fallback) {
  const std::string* s = raw(key);
  const double v = s ? parse_double(key, *s) : fallback;
  resolved_[key] = v;
  return v;
}

std::int64_t Params::integer(const std::string& key, std::int64_t fallback) {
  const std::string* s = raw(key);
  std::int64_t v = fallback;
  if (s) {
    const auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || end != s->data() + s->size()) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + *s + "'");
    }
  }
  resolved_[key] = v;
  return v;
}

bool Params::flag(const std::string& key, bool fallback) {
  const std::string* s = raw(key);
  bool v = fallback;
  if (s) {
    if (*s == "true" || *s == "1" || *s == "yes") {
      v = true;
    } else if (*s == "false" || *s == "0" || *s == "no") {
      v = false;
    } else {
      throw ConfigError("key '" + key + "': expected true or false, got '" + *s + "'");
    }
  }
  resolved_[key] = v;
  return v;
}

std::string Params::text(const std::string& key, const std::string& fallback) {
  const std::string* s = raw(key);
  std::string v = s ? *s : fallback;
  resolved_[key] = v;
  return v;
}

std::vector<double> Params::list(const std::string& key, const std::vector<double>& fallback) {
  const std::string* s = raw(key);
  std::vector<double> v = fallback;
  if (s) {
    v.clear();
    std::string item;
    std::string spaced = *s;
    for (char& c : spaced) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(spaced);
    while (in >> item) v.push_back(parse_double(key, item));
    if (v.empty()) throw ConfigError("key '" + key + "': empty list");
  }
  resolved_[key] = v;
  return v;
}

void Params::finish(const std::string& section_name) const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) {
      throw ConfigError("unknown key '" + key + "' in section [" + section_name + "]");
    }
  }
}

ScenarioConfig default_config(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.out = "out/" + scenario;
  return c;
}

ScenarioConfig load_config(const std::string& path, const std::string& scenario_override) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }

  auto run = section(tree, "run");
  std::string scenario = scenario_override.empty() ? run["scenario"] : scenario_override;
  if (scenario.empty()) throw ConfigError(path + ": no scenario given");

  ScenarioConfig c = default_config(scenario);
  Params run_params(run);
  run_params.text("scenario", scenario);
  const std::int64_t seed = run_params.integer("seed", 0);
  if (seed < 0) throw ConfigError("seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.out = run_params.text("out", c.out);
  c.format = parse_format(run_params.text("format", "csv"));
  run_params.finish("run");

  Params constants(section(tree, "constants"));
  c.constants.hbar = constants.number("hbar", 1.0);
  c.constants.mass = constants.number("mass", 1.0);
  c.constants.k_boltzmann = constants.number("k_boltzmann", 1.0);
  constants.finish("constants");

  for (const auto& [name, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError("key '" + name + "' must sit inside a section");
    }
  }
  c.params = Params(section(tree, scenario));
  return c;
}

}  // namespace probwave::cli
