#include "ampgdf/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '"')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '"')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                         : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "?") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("csv line " + std::to_string(line_no) + ": cannot parse '" + cell + "' as a number");
  }
  return value;
}

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

RawCsv read_raw(std::istream& in) {
  RawCsv raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (raw.header.empty()) {
      raw.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != raw.header.size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(raw.header.size()) + " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    raw.rows.push_back(std::move(row));
  }
  if (raw.header.empty()) throw ParseError("csv: missing header row");
  if (raw.rows.empty()) throw ParseError("csv: no data rows");
  return raw;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(value);
}

Table read_table_csv(std::istream& in) {
  const RawCsv raw = read_raw(in);
  std::ptrdiff_t y_col = -1;
  for (std::size_t j = 0; j < raw.header.size(); ++j) {
    if (raw.header[j] == "y") {
      if (y_col >= 0) throw ParseError("csv: duplicate response column 'y'");
      y_col = static_cast<std::ptrdiff_t>(j);
    }
  }
  if (y_col < 0) throw ParseError("csv: no response column named 'y'");
  if (raw.header.size() < 2) throw ParseError("csv: no predictor columns");

  Table t;
  const Index m = static_cast<Index>(raw.rows.size());
  const Index n = static_cast<Index>(raw.header.size()) - 1;
  t.X.resize(m, n);
  t.y.resize(m);
  for (std::size_t j = 0; j < raw.header.size(); ++j) {
    if (static_cast<std::ptrdiff_t>(j) != y_col) t.predictor_names.push_back(raw.header[j]);
  }
  for (Index i = 0; i < m; ++i) {
    Index col = 0;
    for (std::size_t j = 0; j < raw.header.size(); ++j) {
      const double v = raw.rows[static_cast<std::size_t>(i)][j];
      if (static_cast<std::ptrdiff_t>(j) == y_col) {
        t.y[i] = v;
      } else {
        t.X(i, col++) = v;
      }
    }
  }
  return t;
}

Table read_table_csv(const std::string& path) {
  auto in = open_input(path);
  return read_table_csv(in);
}

Table read_split_csv(const std::string& a_path, const std::string& y_path) {
  auto a_in = open_input(a_path);
  auto y_in = open_input(y_path);
  const RawCsv a = read_raw(a_in);
  const RawCsv y = read_raw(y_in);
  if (y.header.size() != 1) throw ParseError("csv: response file must have exactly one column");
  if (a.rows.size() != y.rows.size()) {
    throw DimensionMismatch("csv: predictor file has " + std::to_string(a.rows.size()) +
                            " rows but response file has " + std::to_string(y.rows.size()));
  }
  Table t;
  t.predictor_names = a.header;
  const Index m = static_cast<Index>(a.rows.size());
  const Index n = static_cast<Index>(a.header.size());
  t.X.resize(m, n);
  t.y.resize(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) t.X(i, j) = a.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    t.y[i] = y.rows[static_cast<std::size_t>(i)][0];
  }
  return t;
}

void write_table_csv(const Table& table, std::ostream& out) {
  for (const auto& name : table.predictor_names) out << name << ',';
  out << "y\n";
  for (Index i = 0; i < table.X.rows(); ++i) {
    for (Index j = 0; j < table.X.cols(); ++j) out << format_double(table.X(i, j)) << ',';
    out << format_double(table.y[i]) << '\n';
  }
}

void write_instance_csv(const RegressionInstance& inst, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream a_out(base / "A.csv");
  std::ofstream y_out(base / "y.csv");
  if (!a_out || !y_out) throw DataError("cannot write into '" + dir + "'");
  for (Index j = 0; j < inst.A.cols(); ++j) a_out << (j ? "," : "") << 'x' << (j + 1);
  a_out << '\n';
  for (Index i = 0; i < inst.A.rows(); ++i) {
    for (Index j = 0; j < inst.A.cols(); ++j) a_out << (j ? "," : "") << format_double(inst.A(i, j));
    a_out << '\n';
  }
  y_out << "y\n";
  for (Index i = 0; i < inst.y.size(); ++i) y_out << format_double(inst.y[i]) << '\n';
}

}  // namespace ampgdf
