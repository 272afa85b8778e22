#pragma once

// Raster and table output. Lengths in tables are written in units of the
// wavelength, numbers with 17 significant digits so that they re-read to the
// same doubles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "trivortex/analytic.hpp"
#include "trivortex/detector.hpp"
#include "trivortex/wavefield.hpp"

namespace trivortex {

enum class RasterKind { amplitude, phase, phase_bg_subtracted };

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// 8-bit binary PGM (P5). Amplitude is mapped linearly min -> 0, max -> 255
/// (all zero when min == max); phase maps -pi -> 0 and just below pi -> 255.
/// The first image row is the largest-y row of the grid.
inline std::vector<std::uint8_t> encode_pgm(const FieldGrid& grid, RasterKind kind) {
  require(grid.rows > 0 && grid.cols > 0 && grid.values.size() == grid.rows * grid.cols,
          "raster is empty or not rectangular");
  require(kind != RasterKind::phase_bg_subtracted,
          "background-subtracted phase needs the source arrangement");
  std::vector<double> level(grid.values.size());
  if (kind == RasterKind::amplitude) {
    std::transform(grid.values.begin(), grid.values.end(), level.begin(),
                   [](Complex v) { return std::abs(v); });
    const auto [lo, hi] = std::minmax_element(level.begin(), level.end());
    const double min = *lo, span = *hi - *lo;
    for (double& l : level) l = span > 0.0 ? std::round(255.0 * (l - min) / span) : 0.0;
  } else {
    std::transform(grid.values.begin(), grid.values.end(), level.begin(), [](Complex v) {
      return std::min(255.0, std::floor(256.0 * (principal_phase(v) + pi) / two_pi));
    });
  }

  const std::string header =
      "P5\n" + std::to_string(grid.cols) + " " + std::to_string(grid.rows) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + level.size());
  for (std::size_t r = grid.rows; r-- > 0;)
    for (std::size_t c = 0; c < grid.cols; ++c)
      bytes.push_back(static_cast<std::uint8_t>(std::clamp(level[r * grid.cols + c], 0.0, 255.0)));
  return bytes;
}

inline std::vector<std::uint8_t> encode_pgm(const FieldGrid& grid, RasterKind kind,
                                            const SourceArrangement& arr) {
  if (kind == RasterKind::phase_bg_subtracted)
    return encode_pgm(subtract_background(grid, arr), RasterKind::phase);
  return encode_pgm(grid, kind);
}

inline void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline void write_raster(const FieldGrid& grid, RasterKind kind, const std::string& path,
                         const SourceArrangement& arr) {
  write_file(path, encode_pgm(grid, kind, arr));
}

inline constexpr const char* prediction_csv_header =
    "m,n,branch,theta_rad,r_perp_over_lambda0,x_over_lambda0,y_over_lambda0";
inline constexpr const char* detection_csv_header = "charge,x_over_lambda0,y_over_lambda0,min_amp";

inline std::string predictions_to_csv(std::span<const VortexPrediction> preds, double lambda0) {
  std::string out = std::string(prediction_csv_header) + "\n";
  for (const auto& p : preds) {
    out += std::to_string(p.m) + "," + std::to_string(p.n) + "," + to_string(p.branch) + "," +
           format_double(p.theta) + "," + format_double(p.r_perp / lambda0) + "," +
           format_double(p.x / lambda0) + "," + format_double(p.y / lambda0) + "\n";
  }
  return out;
}

inline std::string detections_to_csv(std::span<const DetectedVortex> dets, double lambda0) {
  std::string out = std::string(detection_csv_header) + "\n";
  for (const auto& d : dets) {
    out += std::to_string(d.charge) + "," + format_double(d.x / lambda0) + "," +
           format_double(d.y / lambda0) + "," + format_double(d.plaquette_min_amplitude) + "\n";
  }
  return out;
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

inline std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                                      const char* header, std::size_t width) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != header)
    throw Error(Errc::invalid_argument, "unexpected CSV header");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != width) throw Error(Errc::invalid_argument, "malformed CSV row: " + line);
    rows.push_back(std::move(fields));
  }
  return rows;
}
}  // namespace detail

/// Inverse of predictions_to_csv. Exact when lambda0 == 1.
inline std::vector<VortexPrediction> predictions_from_csv(const std::string& text, double lambda0,
                                                          double z0) {
  std::vector<VortexPrediction> out;
  for (const auto& f : detail::csv_rows(text, prediction_csv_header, 7)) {
    VortexPrediction p;
    p.m = std::stoi(f[0]);
    p.n = std::stoi(f[1]);
    if (f[2] == "plus")
      p.branch = Branch::plus;
    else if (f[2] == "minus")
      p.branch = Branch::minus;
    else
      throw Error(Errc::invalid_argument, "unknown branch " + f[2]);
    p.theta = std::stod(f[3]);
    p.r_perp = std::stod(f[4]) * lambda0;
    p.x = std::stod(f[5]) * lambda0;
    p.y = std::stod(f[6]) * lambda0;
    p.z0 = z0;
    out.push_back(p);
  }
  return out;
}

/// Inverse of detections_to_csv; pixel indices are not stored and come back as 0.
inline std::vector<DetectedVortex> detections_from_csv(const std::string& text, double lambda0) {
  std::vector<DetectedVortex> out;
  for (const auto& f : detail::csv_rows(text, detection_csv_header, 4)) {
    DetectedVortex d;
    d.charge = std::stoi(f[0]);
    d.x = std::stod(f[1]) * lambda0;
    d.y = std::stod(f[2]) * lambda0;
    d.plaquette_min_amplitude = std::stod(f[3]);
    out.push_back(d);
  }
  return out;
}

}  // namespace trivortex
