#include "emgdrift/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "emgdrift/error.hpp"

namespace emgdrift::csv {
namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require(std::string_view name) const {
  if (auto idx = column(name)) return *idx;
  throw SchemaError(std::string(name));
}

Table parse(std::istream& in) {
  Table table;
  std::string line;
  bool have_header = false;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    ++data_row;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError(data_row, "expected " + std::to_string(table.header.size()) + " cells, found " +
                                     std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw SchemaError("<header>", "missing header row");
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse(in);
}

double parse_double(std::string_view cell, std::size_t row) {
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw ParseError(row, "non-numeric cell '" + std::string(cell) + "'");
  }
  return value;
}

long long parse_int(std::string_view cell, std::size_t row) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty()) return value;
  // Accept integral values written as reals ("3.0").
  const double as_double = parse_double(cell, row);
  if (std::floor(as_double) != as_double) {
    throw ParseError(row, "expected an integer, found '" + std::string(cell) + "'");
  }
  return static_cast<long long>(as_double);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  (void)ec;
  return std::string(buf, ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace emgdrift::csv
