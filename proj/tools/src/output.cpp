#include "probwave/cli/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "probwave/format.hpp"

namespace probwave::cli {
namespace {

std::string csv_field(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::vector<std::string> complex_columns(const std::string& base) {
  return {base + "_re", base + "_im"};
}

void push_complex(std::vector<Cell>& row, Complex z) {
  row.emplace_back(z.real());
  row.emplace_back(z.imag());
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const Table& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      std::visit([&r](const auto& v) { r.push_back(v); }, c);
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

Check check_below(std::string name, double value, double tolerance) {
  return {std::move(name), std::isfinite(value) && std::abs(value) < tolerance, value, tolerance};
}

Check check_true(std::string name, bool ok, double value) {
  return {std::move(name), ok, value, 0.0};
}

bool ScenarioResult::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

nlohmann::ordered_json make_report(const ScenarioResult& result, const ScenarioConfig& config,
                                   const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["scenario"] = config.scenario;
  j["seed"] = config.seed;
  j["format"] = to_string(config.format);
  j["constants"] = {{"hbar", config.constants.hbar},
                    {"mass", config.constants.mass},
                    {"k_boltzmann", config.constants.k_boltzmann}};
  j["parameters"] = config.params.resolved();
  j["outputs"] = files;
  j["summary"] = result.summary;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : result.checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    // non-finite residuals are not representable in JSON
    if (std::isfinite(c.value)) {
      entry["value"] = c.value;
    } else {
      entry["value"] = nullptr;
    }
    entry["tolerance"] = c.tolerance;
    j["checks"].push_back(std::move(entry));
  }
  j["all_passed"] = result.all_passed();
  return j;
}

std::vector<std::string> write_outputs(const ScenarioResult& result, const ScenarioConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> files;
  for (const auto& table : result.tables) {
    if (config.format == OutputFormat::Csv) {
      std::ostringstream text;
      write_csv(table, text);
      files.push_back(table.name + ".csv");
      write_file(dir / files.back(), text.str());
    } else {
      files.push_back(table.name + ".json");
      write_file(dir / files.back(), to_json(table).dump(2) + "\n");
    }
  }
  write_file(dir / "report.json", make_report(result, config, files).dump(2) + "\n");
  return files;
}

}  // namespace probwave::cli
