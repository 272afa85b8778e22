#pragma once

// First-kind Rayleigh-Sommerfeld propagation from ideal pinholes in an opaque
// screen at z = 0. A delta aperture radiates the propagator
//
//   K = (1/2pi) d/dz [exp(ikr)/r] = (1/2pi)(z/r)(ik/r - 1/r^2) exp(ikr),
//
// which far from the screen and near the axis is a spherical wave times the
// constant ik/2pi. Three coherently lit pinholes therefore reproduce the
// three-source interference pattern.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "trivortex/wavefield.hpp"

namespace trivortex {

struct Pinhole {
  double x = 0.0;
  double y = 0.0;
  Complex weight{1.0, 0.0};
};

struct PinholeScreen {
  std::vector<Pinhole> pinholes;
  double wavenumber = two_pi;
};

inline Complex rs_kernel(const Vec3& obs, double hole_x, double hole_y, double k) {
  const double dx = obs.x - hole_x, dy = obs.y - hole_y;
  const double r = std::sqrt(dx * dx + dy * dy + obs.z * obs.z);
  if (r == 0.0) throw Error(Errc::singular_point, "observation point sits on the pinhole");
  require(obs.z > 0.0, "observation point must lie in front of the screen (z > 0)");
  const Complex bracket{-1.0 / (r * r), k / r};
  return (obs.z / (two_pi * r)) * bracket * std::polar(1.0, k * r);
}

/// Propagator with the 1/r^2 near-field term dropped.
inline Complex rs_kernel_far(const Vec3& obs, double hole_x, double hole_y, double k) {
  require(obs.z > 0.0, "observation point must lie in front of the screen (z > 0)");
  const double dx = obs.x - hole_x, dy = obs.y - hole_y;
  const double r2 = dx * dx + dy * dy + obs.z * obs.z;
  return Complex{0.0, k * obs.z / (two_pi * r2)} * std::polar(1.0, k * std::sqrt(r2));
}

inline Complex pinhole_field(const PinholeScreen& screen, const Vec3& obs) {
  require(!screen.pinholes.empty(), "screen has no pinholes");
  Complex sum{0.0, 0.0};
  for (const auto& p : screen.pinholes)
    sum += p.weight * rs_kernel(obs, p.x, p.y, screen.wavenumber);
  return sum;
}

/// Pinholes at the source positions with weights A_j exp(i phi_j), i.e. a
/// screen lit at normal incidence with the sources' amplitudes and phases.
inline PinholeScreen screen_from_arrangement(const SourceArrangement& arr) {
  arr.validate();
  PinholeScreen screen;
  screen.wavenumber = arr.wavenumber();
  const auto pos = arr.positions();
  const auto phase = arr.phases();
  for (std::size_t j = 0; j < 3; ++j)
    screen.pinholes.push_back({pos[j].x, pos[j].y, std::polar(arr.amplitudes[j], phase[j])});
  return screen;
}

inline FieldGrid sample_pinhole_grid(const PinholeScreen& screen, const Window& window,
                                     std::size_t resolution, double z0) {
  require(z0 > 0.0, "pinhole fields need z0 > 0");
  return sample_grid(window, resolution, z0, FieldModel::pinhole, [&](double x, double y) {
    return pinhole_field(screen, Vec3{x, y, z0});
  });
}

/// N_F = a^2 / (lambda0 z).
inline double fresnel_number(double max_spacing, double lambda0, double z) {
  require(max_spacing >= 0.0 && lambda0 > 0.0 && z > 0.0, "invalid Fresnel number inputs");
  return max_spacing * max_spacing / (lambda0 * z);
}

/// Largest pairwise source separation.
inline double max_spacing(const SourceArrangement& arr) {
  const auto p = arr.positions();
  double a = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      a = std::max(a, std::hypot(p[i].x - p[j].x, p[i].y - p[j].y));
  return a;
}

}  // namespace trivortex
