#include "cavbec/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cavbec {

static_assert(std::endian::native == std::endian::little,
              "binary series are little-endian; big-endian hosts are unsupported");

namespace {

using njson = nlohmann::json;

constexpr const char* kComplexDtype = "c128-le";
constexpr const char* kRealDtype = "f64-le";
constexpr const char* kComplexLayout = "time-major, interleaved re/im";
constexpr const char* kRealLayout = "time-major";

void write_header(std::ofstream& os, const SpatialGrid& grid, const std::vector<double>& times,
                  const char* dtype, const char* layout) {
  njson h;
  h["dtype"] = dtype;
  h["layout"] = layout;
  h["grid"] = {{"half_width", grid.x_max}, {"n_points", grid.n_points}};
  h["times"] = times;
  os << h.dump() << '\n';
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

void check_stream(const std::ostream& os, const std::string& path) {
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_double(row[c]);
    }
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream os = open_out(path, false);
  write_csv(os, table);
  check_stream(os, path);
}

void write_field_series(const std::string& path, const SpatialGrid& grid,
                        const std::vector<double>& times,
                        const std::vector<std::vector<cxd>>& frames) {
  if (frames.size() != times.size())
    throw std::invalid_argument("write_field_series: frame count does not match times");
  std::ofstream os = open_out(path, true);
  write_header(os, grid, times, kComplexDtype, kComplexLayout);
  for (const auto& f : frames) {
    if (static_cast<int>(f.size()) != grid.n_points)
      throw std::invalid_argument("write_field_series: frame size does not match grid");
    os.write(reinterpret_cast<const char*>(f.data()),
             static_cast<std::streamsize>(f.size() * sizeof(cxd)));
  }
  check_stream(os, path);
}

void write_real_series(const std::string& path, const SpatialGrid& grid,
                       const std::vector<double>& times,
                       const std::vector<std::vector<double>>& frames) {
  if (frames.size() != times.size())
    throw std::invalid_argument("write_real_series: frame count does not match times");
  std::ofstream os = open_out(path, true);
  write_header(os, grid, times, kRealDtype, kRealLayout);
  for (const auto& f : frames) {
    if (static_cast<int>(f.size()) != grid.n_points)
      throw std::invalid_argument("write_real_series: frame size does not match grid");
    os.write(reinterpret_cast<const char*>(f.data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  check_stream(os, path);
}

FieldSeries read_field_series(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing header line: " + path);
  njson h;
  try {
    h = njson::parse(line);
  } catch (const njson::parse_error& e) {
    throw std::runtime_error("bad series header in " + path + ": " + e.what());
  }

  FieldSeries s;
  const std::string dtype = h.at("dtype").get<std::string>();
  const std::string layout = h.at("layout").get<std::string>();
  if (dtype == kComplexDtype) {
    s.is_complex = true;
    if (layout != kComplexLayout)
      throw std::runtime_error("unexpected layout for " + dtype + " in " + path);
  } else if (dtype == kRealDtype) {
    s.is_complex = false;
    if (layout != kRealLayout)
      throw std::runtime_error("unexpected layout for " + dtype + " in " + path);
  } else {
    throw std::runtime_error("unknown dtype '" + dtype + "' in " + path);
  }
  const int n = h.at("grid").at("n_points").get<int>();
  const double hw = h.at("grid").at("half_width").get<double>();
  s.grid = make_grid_shared(n, hw);
  s.times = h.at("times").get<std::vector<double>>();

  const size_t per_frame = static_cast<size_t>(n) * (s.is_complex ? 2 : 1);
  std::vector<double> buf(per_frame);
  for (size_t t = 0; t < s.times.size(); ++t) {
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(per_frame * sizeof(double)));
    if (static_cast<size_t>(is.gcount()) != per_frame * sizeof(double))
      throw std::runtime_error("truncated series payload: " + path);
    if (s.is_complex) {
      std::vector<cxd> frame(n);
      for (int i = 0; i < n; ++i) frame[i] = cxd{buf[2 * i], buf[2 * i + 1]};
      s.complex_frames.push_back(std::move(frame));
    } else {
      s.real_frames.emplace_back(buf.begin(), buf.end());
    }
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw std::runtime_error("trailing bytes after series payload: " + path);
  return s;
}

void write_json_file(const std::string& path, const std::string& serialized) {
  std::ofstream os = open_out(path, false);
  os << serialized;
  if (serialized.empty() || serialized.back() != '\n') os << '\n';
  check_stream(os, path);
}

}  // namespace cavbec
