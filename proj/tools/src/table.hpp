#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace d2d::cli {

/// One output cell; monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 12 significant digits; keeps golden files stable across platforms while
/// preserving every test tolerance.
std::string format_number(double value);

/// RFC-4180-style CSV: mandatory header row, LF line endings, quoting only
/// where needed.
std::string to_csv(const Table& table);

/// Array of objects with the column order preserved. Doubles are rounded to
/// 12 significant digits before serialization.
std::string to_json(const Table& table);

}  // namespace d2d::cli
