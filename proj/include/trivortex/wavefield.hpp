#pragma once

// Scalar field synthesis on observation planes z = z0.
//
// Three models are provided: a superposition of plane waves, the exact sum of
// three outgoing spherical waves, and its far-field reduction in which the
// phase is linearised in the source positions and the amplitude is 1/r.
// Source 1 sits at the origin, source 2 on the +x axis at distance r2, and
// source 3 at distance r3 and polar angle theta3, all in the plane z = 0.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "trivortex/error.hpp"

namespace trivortex {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

struct PlaneWave {
  double amplitude = 1.0;
  Vec3 wavevector;
  double phase_offset = 0.0;
};

struct SourceArrangement {
  double wavelength = 1.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double theta3 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  std::array<double, 3> amplitudes{1.0, 1.0, 1.0};

  double wavenumber() const { return two_pi / wavelength; }

  std::array<Vec3, 3> positions() const {
    return {Vec3{0.0, 0.0, 0.0}, Vec3{r2, 0.0, 0.0},
            Vec3{r3 * std::cos(theta3), r3 * std::sin(theta3), 0.0}};
  }

  std::array<double, 3> phases() const { return {0.0, phi2, phi3}; }

  Vec3 centroid() const {
    const auto p = positions();
    return {(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0, 0.0};
  }

  bool equal_amplitudes() const {
    return amplitudes[0] == amplitudes[1] && amplitudes[1] == amplitudes[2];
  }

  void validate() const {
    require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength must be positive");
    require(r2 >= 0.0 && r3 >= 0.0, "source distances must be non-negative");
    for (double a : amplitudes) require(a >= 0.0, "amplitudes must be non-negative");
  }
};

/// Throws UnequalAmplitudes unless A1 = A2 = A3.
inline void require_equal_amplitudes(const SourceArrangement& arr) {
  if (!arr.equal_amplitudes())
    throw Error(Errc::unequal_amplitudes, "closed-form far-field results need A1 = A2 = A3");
}

enum class FieldModel { exact, farfield, planewave, pinhole };

/// Row-major raster of complex samples. Sample (row, col) sits at
/// x = origin_x + col * step, y = origin_y + row * step, so rows grow with y.
struct FieldGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> values;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double step = 1.0;
  double z0 = 0.0;
  FieldModel model = FieldModel::exact;

  Complex& operator()(std::size_t row, std::size_t col) { return values[row * cols + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return values[row * cols + col];
  }
  double x(std::size_t col) const { return origin_x + static_cast<double>(col) * step; }
  double y(std::size_t row) const { return origin_y + static_cast<double>(row) * step; }
};

/// Principal phase in [-pi, pi).
inline double principal_phase(Complex v) {
  const double p = std::arg(v);
  return p >= pi ? p - two_pi : p;
}

/// Square observation window in the plane z = z0.
struct Window {
  double center_x = 0.0;
  double center_y = 0.0;
  double half_width = 1.0;
};

inline Window default_window(double z0) { return {0.0, 0.0, 0.6 * z0}; }

inline Complex plane_superposition(std::span<const PlaneWave> waves, const Vec3& point) {
  require(!waves.empty(), "plane_superposition needs at least one wave");
  Complex sum{0.0, 0.0};
  for (const auto& w : waves)
    sum += std::polar(w.amplitude, dot(w.wavevector, point) + w.phase_offset);
  return sum;
}

/// Exact sum of three spherical waves, sum_j A_j exp(i(k d_j + phi_j)) / d_j.
inline Complex spherical_superposition(const SourceArrangement& arr, const Vec3& point) {
  const double k = arr.wavenumber();
  const auto pos = arr.positions();
  const auto phase = arr.phases();
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < 3; ++j) {
    const double d = norm(Vec3{point.x - pos[j].x, point.y - pos[j].y, point.z});
    if (d == 0.0) throw Error(Errc::source_coincidence, "observation point coincides with a source");
    sum += std::polar(arr.amplitudes[j] / d, k * d + phase[j]);
  }
  return sum;
}

/// Cylindrical observation coordinates (r_perp, theta) in the plane z = z0.
struct Cylindrical {
  double r_perp = 0.0;
  double theta = 0.0;
  double z0 = 1.0;
};

/// Far-field sum with phase k(r - r_perp r_j cos(theta - theta_j) / r) and
/// common amplitude A / r. Requires A1 = A2 = A3 (A = 1 gives the textbook form).
inline Complex farfield_value(const SourceArrangement& arr, const Cylindrical& p) {
  require_equal_amplitudes(arr);
  require(p.z0 > 0.0, "far-field evaluation needs z0 > 0");
  const double k = arr.wavenumber();
  const double r = std::hypot(p.z0, p.r_perp);
  const double t2 = -k * p.r_perp * arr.r2 * std::cos(p.theta) / r + arr.phi2;
  const double t3 = -k * p.r_perp * arr.r3 * std::cos(p.theta - arr.theta3) / r + arr.phi3;
  const Complex envelope = 1.0 + std::polar(1.0, t2) + std::polar(1.0, t3);
  return (arr.amplitudes[0] / r) * std::polar(1.0, k * r) * envelope;
}

inline Complex farfield_value_xy(const SourceArrangement& arr, double x, double y, double z0) {
  return farfield_value(arr, Cylindrical{std::hypot(x, y), std::atan2(y, x), z0});
}

/// Samples `field(x, y)` at the pixel centres of a square window.
template <class Field>
FieldGrid sample_grid(const Window& window, std::size_t resolution, double z0, FieldModel tag,
                      Field&& field) {
  require(resolution >= 2, "resolution must be at least 2");
  require(window.half_width > 0.0, "window half-width must be positive");
  FieldGrid grid;
  grid.rows = grid.cols = resolution;
  grid.step = 2.0 * window.half_width / static_cast<double>(resolution);
  grid.origin_x = window.center_x - window.half_width + 0.5 * grid.step;
  grid.origin_y = window.center_y - window.half_width + 0.5 * grid.step;
  grid.z0 = z0;
  grid.model = tag;
  grid.values.resize(resolution * resolution);
  for (std::size_t r = 0; r < resolution; ++r) {
    const double y = grid.y(r);
    for (std::size_t c = 0; c < resolution; ++c) grid(r, c) = field(grid.x(c), y);
  }
  return grid;
}

/// Exact or far-field raster of a source arrangement.
inline FieldGrid sample_grid(const SourceArrangement& arr, const Window& window,
                             std::size_t resolution, FieldModel model, double z0) {
  arr.validate();
  require(z0 > 0.0, "spherical models need z0 > 0");
  switch (model) {
    case FieldModel::exact:
      return sample_grid(window, resolution, z0, model, [&](double x, double y) {
        return spherical_superposition(arr, Vec3{x, y, z0});
      });
    case FieldModel::farfield:
      require_equal_amplitudes(arr);
      return sample_grid(window, resolution, z0, model, [&](double x, double y) {
        return farfield_value_xy(arr, x, y, z0);
      });
    default:
      throw Error(Errc::invalid_argument, "model not available for a source arrangement");
  }
}

inline FieldGrid sample_grid(std::span<const PlaneWave> waves, const Window& window,
                             std::size_t resolution, double z0) {
  require(!waves.empty(), "need at least one plane wave");
  return sample_grid(window, resolution, z0, FieldModel::planewave, [&](double x, double y) {
    return plane_superposition(waves, Vec3{x, y, z0});
  });
}

/// Multiplies every sample by exp(-i k d_c), d_c the distance from `centre`.
inline FieldGrid subtract_background(FieldGrid grid, const Vec3& centre, double wavenumber) {
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const double d = norm(Vec3{grid.x(c) - centre.x, grid.y(r) - centre.y, grid.z0 - centre.z});
      grid(r, c) *= std::polar(1.0, -wavenumber * d);
    }
  }
  return grid;
}

/// Removes the phase of the spherical wave radiated from the source centroid.
/// Amplitudes are untouched.
inline FieldGrid subtract_background(FieldGrid grid, const SourceArrangement& arr) {
  require(grid.model == FieldModel::exact || grid.model == FieldModel::farfield ||
              grid.model == FieldModel::pinhole,
          "background subtraction applies to spherical-source rasters");
  return subtract_background(std::move(grid), arr.centroid(), arr.wavenumber());
}

}  // namespace trivortex
