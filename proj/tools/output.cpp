#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace cubound::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Tiny values (residuals, tolerances) would print as 0.00000.
std::string fixed5(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, x != 0.0 && std::abs(x) < 1e-4 ? "%.3e" : "%.5f", x);
  return buf;
}

ordered_json to_json(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto d = std::get_if<double>(&c)) return full_precision(*d);
  return std::get<std::int64_t>(c);
}

std::string to_csv(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto d = std::get_if<double>(&c)) return full_precision(*d);
  return std::to_string(std::get<std::int64_t>(c));
}

std::string to_text(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto d = std::get_if<double>(&c)) return fixed5(*d);
  return std::to_string(std::get<std::int64_t>(c));
}

void write_json(std::ostream& out, const OutputRecord& r) {
  ordered_json j;
  j["command"] = r.command;
  j["parameters"] = ordered_json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = to_json(v);
  j["results"] = ordered_json::object();
  for (const auto& [k, v] : r.results) j["results"][k] = to_json(v);
  for (const auto& t : r.tables) {
    auto rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json obj;
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    j["results"][t.name] = std::move(rows);
  }
  j["wall_seconds"] = full_precision(r.wall_seconds);
  out << j.dump(2) << '\n';
}

void write_csv(std::ostream& out, const OutputRecord& r) {
  bool first = true;
  if (!r.results.empty()) {
    out << "key,value\n";
    for (const auto& [k, v] : r.results) out << k << ',' << to_csv(v) << '\n';
    first = false;
  }
  for (const auto& t : r.tables) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << to_csv(row[i]);
      out << '\n';
    }
  }
}

void write_text(std::ostream& out, const OutputRecord& r) {
  std::size_t width = 0;
  for (const auto& [k, v] : r.results) width = std::max(width, k.size());
  for (const auto& [k, v] : r.results)
    out << k << std::string(width - k.size() + 2, ' ') << to_text(v) << '\n';
  for (const auto& t : r.tables) {
    out << '\n';
    std::vector<std::size_t> w(t.columns.size());
    std::vector<bool> left(t.columns.size(), false);  // text columns align left
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
    for (const auto& row : t.rows) {
      auto& line = cells.emplace_back();
      for (std::size_t i = 0; i < row.size(); ++i) {
        line.push_back(to_text(row[i]));
        w[i] = std::max(w[i], line.back().size());
        if (std::holds_alternative<std::string>(row[i])) left[i] = true;
      }
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        const std::string pad(w[i] - line[i].size(), ' ');
        out << (i ? "  " : "");
        if (left[i])
          out << line[i] << (i + 1 < line.size() ? pad : "");
        else
          out << pad << line[i];
      }
      out << '\n';
    };
    emit(t.columns);
    for (const auto& line : cells) emit(line);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", r.wall_seconds);
  out << "\nwall time " << buf << " s\n";
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected text, json or csv)");
}

std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(std::ostream& out, const OutputRecord& record, Format format) {
  switch (format) {
    case Format::Json: write_json(out, record); break;
    case Format::Csv: write_csv(out, record); break;
    case Format::Text: write_text(out, record); break;
  }
}

}  // namespace cubound::cli
