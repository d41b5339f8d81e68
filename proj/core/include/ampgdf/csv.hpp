#pragma once

#include <iosfwd>
#include <string>

#include "ampgdf/data.hpp"

namespace ampgdf {

/// Reads a header-first CSV with a response column named `y`; every other
/// column is a predictor. Empty, "NA", "NaN" and "?" cells become NaN.
/// Throws ParseError.
Table read_table_csv(std::istream& in);
Table read_table_csv(const std::string& path);

/// Reads a predictor-only CSV (header row, N columns) and a response-only
/// CSV (header `y`), as written by write_instance_csv.
Table read_split_csv(const std::string& a_path, const std::string& y_path);

void write_table_csv(const Table& table, std::ostream& out);

/// Writes `A.csv` (header x1..xN) and `y.csv` (header y) into `dir`,
/// creating it if needed.
void write_instance_csv(const RegressionInstance& inst, const std::string& dir);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace ampgdf
