#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace modred::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// %.17g: enough digits for every double to round-trip.
std::string format_number(double value);

/// Header row plus one line per row, comma separated, LF endings, no quoting.
void write_csv(std::ostream& os, const Table& table);

/// Array of objects keyed by column name.
void write_json(std::ostream& os, const Table& table);

/// Parses a CSV written by write_csv. Numeric cells become doubles, the rest
/// stay strings.
Table read_csv(const std::string& text);

}  // namespace modred::cli
