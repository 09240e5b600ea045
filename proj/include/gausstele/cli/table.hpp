#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gausstele::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> header;  // echoed as "# key=value"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Twelve significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);

/// {"meta": {...}, "columns": [...], "rows": [{column: value}, ...]}.
/// Non-finite numbers become the strings used in CSV output.
void write_json(std::ostream& out, const Table& table);

}  // namespace gausstele::cli
