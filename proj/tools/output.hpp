#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cubound::cli {

enum class Format { Text, Json, Csv };

Format parse_format(const std::string& name);

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// What every command prints: the command, its parameters, its results and
/// the wall time. Results are reproducible for identical flags; the wall
/// time is kept apart from them.
struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, Cell>> parameters;
  std::vector<std::pair<std::string, Cell>> results;
  std::vector<Table> tables;
  double wall_seconds = 0.0;

  void param(std::string key, Cell value) { parameters.emplace_back(std::move(key), std::move(value)); }
  void result(std::string key, Cell value) { results.emplace_back(std::move(key), std::move(value)); }
};

/// 17 significant digits.
std::string full_precision(double x);

void write(std::ostream& out, const OutputRecord& record, Format format);

}  // namespace cubound::cli
