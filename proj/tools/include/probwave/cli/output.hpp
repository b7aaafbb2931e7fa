#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "probwave/cli/config.hpp"
#include "probwave/core.hpp"

namespace probwave::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Named record set. Complex columns are stored as name_re, name_im pairs.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table(std::string table_name, std::vector<std::string> column_names)
      : name(std::move(table_name)), columns(std::move(column_names)) {}

  /// Appends a row; throws std::logic_error on a width mismatch.
  void add(std::vector<Cell> row);
};

/// Column names base_re, base_im.
std::vector<std::string> complex_columns(const std::string& base);
/// Appends re and im cells.
void push_complex(std::vector<Cell>& row, Complex z);

/// Header row then one line per record, numbers through format_number.
void write_csv(const Table& table, std::ostream& out);
/// {"columns": [...], "rows": [[...], ...]}.
nlohmann::ordered_json to_json(const Table& table);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Passes when value is finite and |value| < tolerance.
Check check_below(std::string name, double value, double tolerance);
Check check_true(std::string name, bool ok, double value = 0.0);

struct ScenarioResult {
  std::vector<Table> tables;
  std::vector<Check> checks;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  bool all_passed() const;
};

/// Writes one file per table (name.csv or name.json) and report.json into
/// config.out, creating the directory. Returns the file names written.
/// Throws std::runtime_error on I/O failure.
std::vector<std::string> write_outputs(const ScenarioResult& result, const ScenarioConfig& config);

/// The report.json document.
nlohmann::ordered_json make_report(const ScenarioResult& result, const ScenarioConfig& config,
                                   const std::vector<std::string>& files);

}  // namespace probwave::cli
