#include "lsint/node_csv.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lsint {

namespace {

struct Row {
  std::array<long, 3> index{0, 0, 0};
  double value = 0.0;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
      field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

template <class T>
bool parse_field(std::string_view s, T& value) {
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

NodeSamples read_node_csv(std::istream& in) {
  std::vector<Row> rows;
  int columns = 0;
  std::string line;
  long line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (view.empty() || view.front() == '#' || view.find_first_not_of(" \t\r") == view.npos)
      continue;
    const auto fields = split(view);
    if (fields.size() != 3 && fields.size() != 4)
      throw std::invalid_argument(
          fmt::format("line {}: expected 3 or 4 columns, got {}", line_no, fields.size()));
    Row row;
    bool ok = true;
    for (std::size_t c = 0; c + 1 < fields.size(); ++c)
      ok = ok && parse_field(fields[c], row.index[c]);
    ok = ok && parse_field(fields.back(), row.value);
    if (!ok) {
      if (header_allowed && fields[0] == "i") {
        header_allowed = false;
        continue;
      }
      throw std::invalid_argument(fmt::format("line {}: malformed row '{}'", line_no, line));
    }
    header_allowed = false;
    if (columns == 0)
      columns = static_cast<int>(fields.size());
    else if (columns != static_cast<int>(fields.size()))
      throw std::invalid_argument(fmt::format("line {}: inconsistent column count", line_no));
    if (!std::isfinite(row.value))
      throw std::invalid_argument(fmt::format("line {}: value is not finite", line_no));
    rows.push_back(row);
  }
  if (rows.empty())
    throw std::invalid_argument("node CSV has no data rows");

  const int dim = columns - 1;
  long max_index = 0;
  for (const Row& row : rows)
    for (int c = 0; c < dim; ++c) {
      if (row.index[c] < 0)
        throw std::invalid_argument("node CSV has a negative index");
      max_index = std::max(max_index, row.index[c]);
    }
  if (max_index < 1)
    throw std::invalid_argument("node CSV needs at least two nodes per axis");
  if (max_index > std::numeric_limits<int>::max())
    throw std::invalid_argument("node CSV index out of range");

  NodeSamples samples;
  samples.grid.dim = dim;
  samples.grid.n_cells = static_cast<int>(max_index);
  validate(samples.grid);
  const long n = samples.grid.nodes_per_axis();
  const std::size_t total = static_cast<std::size_t>(dim == 3 ? n * n * n : n * n);
  if (rows.size() != total)
    throw std::invalid_argument(
        fmt::format("node CSV has {} rows; a {}D lattice with N = {} needs {}", rows.size(), dim,
                    max_index, total));
  samples.values.assign(total, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> seen(total, 0);
  for (const Row& row : rows) {
    const std::size_t id =
        static_cast<std::size_t>(dim == 3 ? (row.index[0] * n + row.index[1]) * n + row.index[2]
                                          : row.index[0] * n + row.index[1]);
    if (seen[id])
      throw std::invalid_argument(fmt::format("node ({}, {}) appears twice", row.index[0],
                                              row.index[1]));
    seen[id] = 1;
    samples.values[id] = row.value;
  }
  return samples;
}

void write_node_csv(std::ostream& out, const GridSpec& grid, const std::vector<double>& values,
                    const char* value_column) {
  const long n = grid.nodes_per_axis();
  const long nk = grid.dim == 3 ? n : 1;
  if (values.size() != static_cast<std::size_t>(n * n * nk))
    throw std::invalid_argument("write_node_csv: value count does not match the grid");
  if (grid.dim == 3)
    fmt::print(out, "i,j,k,{}\n", value_column);
  else
    fmt::print(out, "i,j,{}\n", value_column);
  std::size_t id = 0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      for (long k = 0; k < nk; ++k, ++id) {
        if (grid.dim == 3)
          fmt::print(out, "{},{},{},{}\n", i, j, k, values[id]);
        else
          fmt::print(out, "{},{},{}\n", i, j, values[id]);
      }
}

void write_distance_csv(std::ostream& out, const DistanceGrid& dg) {
  write_node_csv(out, dg.grid, dg.values, "d");
}

} // namespace lsint
