#include "cli/table.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace modred::cli {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string render(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return std::get<std::string>(cell);
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << render(row[i]);
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& table) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i])) {
        obj[table.columns[i]] = *d;
      } else {
        obj[table.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

Table read_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ls(s);
    while (std::getline(ls, cur, ',')) parts.push_back(cur);
    return parts;
  };
  if (!std::getline(in, line)) return table;
  table.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& field : split(line)) {
      double value = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) {
        row.emplace_back(value);
      } else {
        row.emplace_back(field);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace modred::cli
