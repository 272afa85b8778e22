#pragma once

// Closed-form far-field vortex positions.
//
// A far-field zero needs the three unit phasors 1, exp(i gamma), exp(i eta) to
// close into an equilateral triangle, i.e. (gamma, eta) = (2pi/3, 4pi/3) or
// (4pi/3, 2pi/3) modulo 2pi. The integers (m, n) count the whole turns:
//
//   gamma = -k r_perp r2 cos(theta) / r + phi2 = 2pi/3 + 2 m pi
//   eta   = -k r_perp r3 cos(theta - theta3) / r + phi3 = 4pi/3 + 2 n pi
//
// `Branch::plus` is the vortex solving these two relations; `Branch::minus`
// is the one with the triangle traversed the other way round. For in-phase
// sources the two are point reflections of each other through the optic axis.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "trivortex/lattice.hpp"
#include "trivortex/wavefield.hpp"

namespace trivortex {

struct MNScale {
  double M = 0.0;
  double N = 0.0;
};

inline MNScale mn_scale(int m, int n, double phi2, double phi3) {
  return {2.0 * (1.0 + 3.0 * m) * pi - 3.0 * phi2, 2.0 * (2.0 + 3.0 * n) * pi - 3.0 * phi3};
}

/// Phasor angles at a far-field point and the winding indices they quantise to.
struct PhasorAngles {
  double gamma = 0.0;
  double eta = 0.0;
  long m = 0;
  long n = 0;
};

inline PhasorAngles phasor_angles(const SourceArrangement& arr, double x, double y, double z0) {
  const double k = arr.wavenumber();
  const double r = std::sqrt(x * x + y * y + z0 * z0);
  const double u3 = x * std::cos(arr.theta3) + y * std::sin(arr.theta3);
  PhasorAngles a;
  a.gamma = -k * x * arr.r2 / r + arr.phi2;
  a.eta = -k * u3 * arr.r3 / r + arr.phi3;
  a.m = std::lround((a.gamma - two_pi / 3.0) / two_pi);
  a.n = std::lround((a.eta - 2.0 * two_pi / 3.0) / two_pi);
  return a;
}

enum class Branch { plus, minus };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

struct VortexPrediction {
  int m = 0;
  int n = 0;
  Branch branch = Branch::plus;
  double theta = 0.0;   // [0, 2pi)
  double r_perp = 0.0;  // >= 0
  double x = 0.0;
  double y = 0.0;
  double z0 = 0.0;
};

namespace detail {

inline constexpr double collinear_sine = 1e-12;
inline constexpr double degenerate_scale = 1e-12;

inline double wrap_two_pi(double theta) {
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  return theta >= two_pi ? 0.0 : theta;
}

inline void require_predictable(const SourceArrangement& arr) {
  arr.validate();
  require_equal_amplitudes(arr);
  if (arr.r2 <= 0.0 || arr.r3 <= 0.0 || std::abs(std::sin(arr.theta3)) < collinear_sine)
    throw Error(Errc::collinear_arrangement, "sources must be distinct and non-collinear");
}

inline double checked_M(int m, double phi2) {
  const double M = mn_scale(m, 0, phi2, 0.0).M;
  if (std::abs(M) < degenerate_scale)
    throw Error(Errc::degenerate_index, "M(m) vanishes for this index and phase");
  return M;
}

inline double tan_theta(int m, int n, const SourceArrangement& arr, double phi2, double phi3) {
  const auto s = mn_scale(m, n, phi2, phi3);
  return ((arr.r2 / arr.r3) * (s.N / s.M) - std::cos(arr.theta3)) / std::sin(arr.theta3);
}

struct PolarPoint {
  double theta;
  double r_perp;
};

// The gamma = 2pi/3 + 2m pi solution for the given phases, if real.
inline std::optional<PolarPoint> primary_solution(int m, int n, const SourceArrangement& arr,
                                                  double z0, double phi2, double phi3) {
  const double M = checked_M(m, phi2);
  const double t = tan_theta(m, n, arr, phi2, phi3);
  const double ratio = 3.0 * arr.wavenumber() * arr.r2 / M;
  const double radicand = ratio * ratio / (1.0 + t * t) - 1.0;
  if (!(radicand > 0.0)) return std::nullopt;
  double theta = std::atan(t);
  // Unsquared relation: -k r_perp r2 cos(theta) / r = M / 3, so cos(theta) and M differ in sign.
  if (M > 0.0) theta += pi;
  return PolarPoint{wrap_two_pi(theta), z0 / std::sqrt(radicand)};
}

inline VortexPrediction make_prediction(int m, int n, Branch b, PolarPoint p, double z0) {
  return {m, n, b, p.theta, p.r_perp, p.r_perp * std::cos(p.theta), p.r_perp * std::sin(p.theta),
          z0};
}

}  // namespace detail

/// Principal-branch polar angle of the (m, n) core, in (-pi/2, pi/2).
inline double predict_theta(int m, int n, const SourceArrangement& arr) {
  detail::require_predictable(arr);
  detail::checked_M(m, arr.phi2);
  return std::atan(detail::tan_theta(m, n, arr, arr.phi2, arr.phi3));
}

/// Far-field cores labelled (m, n). Returns the plus and minus solutions that
/// are real; for in-phase sources this is always zero or two entries.
inline std::vector<VortexPrediction> predict_vortex(int m, int n, const SourceArrangement& arr,
                                                    double z0) {
  detail::require_predictable(arr);
  require(z0 > 0.0, "z0 must be positive");
  std::vector<VortexPrediction> out;
  if (auto p = detail::primary_solution(m, n, arr, z0, arr.phi2, arr.phi3))
    out.push_back(detail::make_prediction(m, n, Branch::plus, *p, z0));
  // The minus solution is the reflection of the plus solution for negated phases.
  if (std::abs(mn_scale(m, n, -arr.phi2, -arr.phi3).M) >= detail::degenerate_scale) {
    if (auto p = detail::primary_solution(m, n, arr, z0, -arr.phi2, -arr.phi3)) {
      p->theta = detail::wrap_two_pi(p->theta + pi);
      out.push_back(detail::make_prediction(m, n, Branch::minus, *p, z0));
    }
  }
  return out;
}

/// Every far-field core of the arrangement, sorted by (m, n, branch). Collinear
/// or coincident arrangements have none.
inline std::vector<VortexPrediction> predict_all(const SourceArrangement& arr, double z0) {
  arr.validate();
  require_equal_amplitudes(arr);
  require(z0 > 0.0, "z0 must be positive");
  if (arr.r2 <= 0.0 || arr.r3 <= 0.0 || std::abs(std::sin(arr.theta3)) < detail::collinear_sine)
    return {};
  SourceArrangement mirrored = arr;
  mirrored.phi2 = -arr.phi2;
  mirrored.phi3 = -arr.phi3;
  std::set<LatticeIndex> indices;
  for (const auto& idx : enumerate_lattice(arr)) indices.insert(idx);
  for (const auto& idx : enumerate_lattice(mirrored)) indices.insert(idx);
  std::vector<VortexPrediction> out;
  for (const auto& idx : indices)
    for (auto& p : predict_vortex(idx.m, idx.n, arr, z0)) out.push_back(p);
  return out;
}

/// Radial distance of the m-indexed trajectory at polar angle theta, or empty
/// where the curve has no point (beyond its asymptotes).
inline std::optional<double> hyperbola_m(int m, const SourceArrangement& arr, double z0,
                                         double theta) {
  detail::require_predictable(arr);
  require(z0 > 0.0, "z0 must be positive");
  const double M = detail::checked_M(m, arr.phi2);
  const double a = 3.0 * arr.wavenumber() * arr.r2 * std::cos(theta);
  const double radicand = a * a - M * M;
  if (!(radicand > 0.0)) return std::nullopt;
  return std::abs(M) * z0 / std::sqrt(radicand);
}

inline std::optional<double> hyperbola_n(int n, const SourceArrangement& arr, double z0,
                                         double theta) {
  detail::require_predictable(arr);
  require(z0 > 0.0, "z0 must be positive");
  const double N = mn_scale(0, n, 0.0, arr.phi3).N;
  if (std::abs(N) < detail::degenerate_scale)
    throw Error(Errc::degenerate_index, "N(n) vanishes for this index and phase");
  const double a = 3.0 * arr.wavenumber() * arr.r3 * std::cos(theta - arr.theta3);
  const double radicand = a * a - N * N;
  if (!(radicand > 0.0)) return std::nullopt;
  return std::abs(N) * z0 / std::sqrt(radicand);
}

/// Intersection of an m-curve branch with an n-curve branch. The squared
/// curves meet in up to four points; only those where the far field vanishes
/// are vortices.
struct HyperbolaIntersection {
  int sign_m = 1;
  int sign_n = 1;
  double x = 0.0;
  double y = 0.0;
  double residual = 0.0;  // |psi| r / (3A)
  bool physical = false;
};

inline std::vector<HyperbolaIntersection> hyperbola_intersections(int m, int n,
                                                                  const SourceArrangement& arr,
                                                                  double z0,
                                                                  double tolerance = 1e-9) {
  detail::require_predictable(arr);
  require(z0 > 0.0, "z0 must be positive");
  const double k = arr.wavenumber();
  const auto s = mn_scale(m, n, arr.phi2, arr.phi3);
  const double alpha = -s.M / (3.0 * k * arr.r2);
  const double beta = -s.N / (3.0 * k * arr.r3);
  const double c3 = std::cos(arr.theta3), s3 = std::sin(arr.theta3);
  std::vector<HyperbolaIntersection> out;
  for (int sm : {1, -1}) {
    for (int sn : {1, -1}) {
      const double ux = sm * alpha;
      const double uy = (sn * beta - ux * c3) / s3;
      const double q = ux * ux + uy * uy;
      if (!(q < 1.0)) continue;
      const double r = z0 / std::sqrt(1.0 - q);
      HyperbolaIntersection hit{sm, sn, r * ux, r * uy};
      hit.residual = std::abs(farfield_value_xy(arr, hit.x, hit.y, z0)) * r /
                     (3.0 * arr.amplitudes[0]);
      hit.physical = hit.residual < tolerance;
      out.push_back(hit);
    }
  }
  return out;
}

/// Sampled trajectory curve for one index. `primary` is the branch along which
/// the plus-solution core moves as the other source phase varies.
struct TrajectoryCurve {
  char family = 'm';
  int index = 0;
  bool primary = true;
  std::vector<std::pair<double, double>> points;
};

/// Shape parameters of one trajectory hyperbola. `vertex` is the distance of
/// each branch from the optic axis along the family axis (x for m, the source
/// 3 direction for n); `asymptote_theta` is the polar angle of the asymptotes
/// measured from that axis.
struct HyperbolaParams {
  char family = 'm';
  int index = 0;
  double scale = 0.0;  // M(m) or N(n)
  double vertex = 0.0;
  double asymptote_theta = 0.0;
};

namespace detail {
inline double family_alpha(char family, int index, const SourceArrangement& arr) {
  const auto s = mn_scale(index, index, arr.phi2, arr.phi3);
  const double k = arr.wavenumber();
  return family == 'm' ? -s.M / (3.0 * k * arr.r2) : -s.N / (3.0 * k * arr.r3);
}
}  // namespace detail

inline std::optional<HyperbolaParams> hyperbola_params(char family, int index,
                                                       const SourceArrangement& arr, double z0) {
  detail::require_predictable(arr);
  require(family == 'm' || family == 'n', "family must be 'm' or 'n'");
  const double alpha = detail::family_alpha(family, index, arr);
  if (!(std::abs(alpha) < 1.0)) return std::nullopt;
  const auto s = mn_scale(index, index, arr.phi2, arr.phi3);
  return HyperbolaParams{family, index, family == 'm' ? s.M : s.N,
                         std::abs(alpha) * z0 / std::sqrt(1.0 - alpha * alpha),
                         std::acos(std::abs(alpha))};
}

/// Both branches of the trajectory for `index`, sampled along the transverse
/// coordinate in [-extent, extent]. Empty when the curve has no real points.
inline std::vector<TrajectoryCurve> sample_trajectory(char family, int index,
                                                      const SourceArrangement& arr, double z0,
                                                      double extent, std::size_t samples) {
  detail::require_predictable(arr);
  require(family == 'm' || family == 'n', "family must be 'm' or 'n'");
  require(samples >= 2 && extent > 0.0 && z0 > 0.0, "invalid trajectory sampling");
  const double alpha = detail::family_alpha(family, index, arr);
  if (!(std::abs(alpha) < 1.0)) return {};
  const double axis = family == 'm' ? 0.0 : arr.theta3;
  const double ca = std::cos(axis), sa = std::sin(axis);
  std::vector<TrajectoryCurve> out;
  for (int sign : {1, -1}) {
    TrajectoryCurve curve{family, index, (sign > 0) == (alpha >= 0.0), {}};
    for (std::size_t i = 0; i < samples; ++i) {
      const double v = -extent + 2.0 * extent * static_cast<double>(i) /
                                     static_cast<double>(samples - 1);
      const double u = sign * std::abs(alpha) * std::sqrt((v * v + z0 * z0) / (1.0 - alpha * alpha));
      curve.points.emplace_back(u * ca - v * sa, u * sa + v * ca);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

/// Small-angle form of the (m, n) core as the arrangement approaches
/// collinearity, with epsilon measured so that sin(theta3) ~ epsilon
/// (theta3 = pi - epsilon). The radius turns imaginary when the core has
/// escaped to infinity.
struct CollinearLimit {
  double theta = 0.0;
  double r_perp = 0.0;  // magnitude; imaginary part when `imaginary`
  bool imaginary = false;
};

inline CollinearLimit collinear_limit(double epsilon, int m, int n, const SourceArrangement& arr,
                                      double z0) {
  arr.validate();
  require(std::abs(epsilon) <= 0.1, "collinear limit needs |epsilon| <= 0.1 rad");
  require(arr.r2 > 0.0 && arr.r3 > 0.0, "source distances must be positive");
  require(z0 > 0.0, "z0 must be positive");
  const double M = detail::checked_M(m, arr.phi2);
  const auto s = mn_scale(m, n, arr.phi2, arr.phi3);
  const double offset = (arr.r2 / arr.r3) * (s.N / M) + 1.0;
  CollinearLimit out;
  if (epsilon != 0.0)
    out.theta = std::atan(offset / epsilon);
  else
    out.theta = offset != 0.0 ? 0.5 * pi : 0.0;
  // cos^2(theta) = eps^2 / (eps^2 + offset^2)
  const double denom = epsilon * epsilon + offset * offset;
  const double cos2 = denom > 0.0 ? epsilon * epsilon / denom : 1.0;
  const double ratio = 3.0 * arr.wavenumber() * arr.r2 / M;
  const double radicand = ratio * ratio * cos2 - 1.0;
  out.imaginary = radicand < 0.0;
  out.r_perp = radicand == 0.0 ? INFINITY : z0 / std::sqrt(std::abs(radicand));
  return out;
}

}  // namespace trivortex
