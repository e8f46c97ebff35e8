#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cavbec/field.hpp"
#include "cavbec/grid.hpp"

namespace cavbec {

// Numeric table written as CSV: one header line, then one row per entry,
// every value formatted with %.17g so a round-trip through text is exact.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row matches columns.size()
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

std::string format_double(double v);  // %.17g

// Time series of grid-shaped frames stored as a single-line JSON header
// followed by raw little-endian doubles.  Complex frames ("c128-le") are
// time-major with re/im interleaved; real frames ("f64-le") are time-major.
struct FieldSeries {
  GridPtr grid;
  std::vector<double> times;
  std::vector<std::vector<cxd>> complex_frames;   // when dtype was c128-le
  std::vector<std::vector<double>> real_frames;   // when dtype was f64-le
  bool is_complex = true;
};

void write_field_series(const std::string& path, const SpatialGrid& grid,
                        const std::vector<double>& times,
                        const std::vector<std::vector<cxd>>& frames);
void write_real_series(const std::string& path, const SpatialGrid& grid,
                       const std::vector<double>& times,
                       const std::vector<std::vector<double>>& frames);
FieldSeries read_field_series(const std::string& path);

// Pretty-printed JSON with alphabetically sorted keys and a trailing newline.
void write_json_file(const std::string& path, const std::string& serialized);

}  // namespace cavbec
