#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emgdrift::csv {

/// A comma-separated file held as text cells. No quoting support: every
/// schema in this toolkit is purely numeric apart from the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  /// Like column() but throws SchemaError naming the column.
  std::size_t require(std::string_view name) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::istream& in);

/// `row` is the 1-based data row used in error messages.
double parse_double(std::string_view cell, std::size_t row);
long long parse_int(std::string_view cell, std::size_t row);

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);
std::string format_fixed(double value, int decimals);

/// Opens `path` for writing, throwing emgdrift::Error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace emgdrift::csv
