#pragma once

// Parameter-space description of the far-field vortex set.
//
// Each far-field vortex pair is labelled by integers (m, n) counting the 2*pi
// windings of the two source phasors. Admissible labels are the lattice points
// strictly inside an ellipse in the (m, n) plane whose shape depends only on
// k, r2, r3 and theta3; the source phases translate the lattice.

#include <algorithm>
#include <cmath>
#include <vector>

#include "trivortex/wavefield.hpp"

namespace trivortex {

struct LatticeIndex {
  int m = 0;
  int n = 0;
  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

/// Q(m, n) = a m^2 + 2h mn + b n^2 + 2g m + 2f n + c.
struct ConicCoefficients {
  double a = 0, h = 0, b = 0, g = 0, f = 0, c = 0;

  double value(double m, double n) const {
    return a * m * m + 2.0 * h * m * n + b * n * n + 2.0 * g * m + 2.0 * f * n + c;
  }
  double big_delta() const {
    return a * (b * c - f * f) - h * (h * c - f * g) + g * (h * f - b * g);
  }
  double small_delta() const { return a * b - h * h; }
  double tau() const { return a + b; }
};

struct EllipseDescriptor {
  ConicCoefficients conic;
  double Delta = 0, delta = 0, tau = 0;
  double m0 = 0, n0 = 0;
  double phi_rot = 0;
  double s_plus = 0, s_minus = 0;
  double lambda_plus = 0, lambda_minus = 0;
};

enum class ConicKind { ellipse, degenerate_line, empty };

inline const char* to_string(ConicKind kind) {
  switch (kind) {
    case ConicKind::ellipse: return "ellipse";
    case ConicKind::degenerate_line: return "degenerate_line";
    case ConicKind::empty: return "empty";
  }
  return "empty";
}

/// Coefficients of the boundary conic for in-phase sources.
inline ConicCoefficients conic_coefficients(const SourceArrangement& arr) {
  const double r2 = arr.r2, r3 = arr.r3;
  const double c3 = std::cos(arr.theta3), s3 = std::sin(arr.theta3);
  const double rhs = 3.0 * arr.wavenumber() * r2 * r3 * s3 / two_pi;
  ConicCoefficients q;
  q.a = 9.0 * r3 * r3;
  q.h = -9.0 * r2 * r3 * c3;
  q.b = 9.0 * r2 * r2;
  q.g = 3.0 * r3 * r3 - 6.0 * r2 * r3 * c3;
  q.f = 6.0 * r2 * r2 - 3.0 * r2 * r3 * c3;
  q.c = r3 * r3 + 4.0 * r2 * r2 - 4.0 * r2 * r3 * c3 - rhs * rhs;
  return q;
}

/// Invariants and geometry of the phase-free parameter-space ellipse. For
/// degenerate arrangements the geometric fields are left at zero; use
/// classify() before relying on them.
inline EllipseDescriptor conic_from_arrangement(const SourceArrangement& arr) {
  arr.validate();
  EllipseDescriptor e;
  e.conic = conic_coefficients(arr);
  const auto& q = e.conic;
  e.Delta = q.big_delta();
  e.delta = q.small_delta();
  e.tau = q.tau();

  // lambda^2 - tau lambda + delta = 0
  const double disc = std::sqrt(std::max(0.0, 0.25 * e.tau * e.tau - e.delta));
  e.lambda_plus = 0.5 * e.tau + disc;
  e.lambda_minus = e.lambda_plus > 0.0 ? e.delta / e.lambda_plus : 0.5 * e.tau - disc;

  if (e.delta != 0.0) {
    const double det = q.h * q.h - q.a * q.b;
    e.m0 = (q.b * q.g - q.h * q.f) / det;
    e.n0 = (q.a * q.f - q.h * q.g) / det;
    if (e.lambda_plus != 0.0) e.s_plus = std::sqrt(std::abs(e.Delta / (e.lambda_plus * e.delta)));
    if (e.lambda_minus != 0.0)
      e.s_minus = std::sqrt(std::abs(e.Delta / (e.lambda_minus * e.delta)));
  }
  // phi = arccot((b - a) / 2h) / 2 with arccot(x) = pi/2 - atan(x), in (0, pi/2).
  if (q.h != 0.0) e.phi_rot = 0.5 * (0.5 * pi - std::atan((q.b - q.a) / (2.0 * q.h)));
  return e;
}

inline ConicKind classify(const EllipseDescriptor& e) {
  const auto& q = e.conic;
  if (q.a == 0.0 || q.b == 0.0) return ConicKind::empty;
  // delta = a b sin^2(theta3); treat |sin theta3| < 1e-6 as collinear.
  if (e.delta <= 1e-12 * q.a * q.b) return ConicKind::degenerate_line;
  if (e.Delta != 0.0 && e.delta > 0.0 && e.Delta / e.tau < 0.0) return ConicKind::ellipse;
  return ConicKind::empty;
}

struct LatticeShift {
  double dm = 0.0;
  double dn = 0.0;
};

inline LatticeShift lattice_shift(double phi2, double phi3) {
  return {phi2 / two_pi, phi3 / two_pi};
}

struct BoundingRectangle {
  double center_m = 0, center_n = 0;
  double width_m = 0, width_n = 0;
};

/// Envelope of the theta3-family of ellipses, translated by the phase shift.
inline BoundingRectangle bounding_rectangle(const SourceArrangement& arr) {
  const auto shift = lattice_shift(arr.phi2, arr.phi3);
  const double k = arr.wavenumber();
  return {-1.0 / 3.0 + shift.dm, -2.0 / 3.0 + shift.dn, k * arr.r2 / pi, k * arr.r3 / pi};
}

/// Left and right sides of the admissibility inequality at lattice point
/// (m, n), after removing the phase translation.
struct Admissibility {
  double lhs = 0.0;
  double rhs = 0.0;
  bool inside() const { return lhs < rhs; }
  /// 1 at the ellipse centre, 0 on the boundary, negative outside.
  double depth() const { return rhs > 0.0 ? 1.0 - lhs / rhs : -1.0; }
};

inline Admissibility admissibility(const SourceArrangement& arr, double m, double n) {
  const auto shift = lattice_shift(arr.phi2, arr.phi3);
  const double mm = 1.0 + 3.0 * (m - shift.dm);
  const double nn = 2.0 + 3.0 * (n - shift.dn);
  const double s3 = std::sin(arr.theta3), c3 = std::cos(arr.theta3);
  const double u = mm * s3;
  const double v = nn * (arr.r2 / arr.r3) - mm * c3;
  const double w = 3.0 * arr.wavenumber() * arr.r2 * s3 / two_pi;
  return {u * u + v * v, w * w};
}

namespace detail {
template <class Visit>
void scan_rectangle(const SourceArrangement& arr, Visit&& visit) {
  const auto box = bounding_rectangle(arr);
  const int m_lo = static_cast<int>(std::floor(box.center_m - 0.5 * box.width_m - 1.0));
  const int m_hi = static_cast<int>(std::ceil(box.center_m + 0.5 * box.width_m + 1.0));
  const int n_lo = static_cast<int>(std::floor(box.center_n - 0.5 * box.width_n - 1.0));
  const int n_hi = static_cast<int>(std::ceil(box.center_n + 0.5 * box.width_n + 1.0));
  for (int m = m_lo; m <= m_hi; ++m)
    for (int n = n_lo; n <= n_hi; ++n) visit(m, n);
}

inline bool has_ellipse(const SourceArrangement& arr) {
  if (arr.r2 <= 0.0 || arr.r3 <= 0.0) return false;
  return classify(conic_from_arrangement(arr)) == ConicKind::ellipse;
}
}  // namespace detail

/// Integer pairs strictly inside the phase-translated ellipse, sorted
/// lexicographically. Collinear or degenerate arrangements give an empty list.
inline std::vector<LatticeIndex> enumerate_lattice(const SourceArrangement& arr) {
  std::vector<LatticeIndex> out;
  if (!detail::has_ellipse(arr)) return out;
  detail::scan_rectangle(arr, [&](int m, int n) {
    if (admissibility(arr, m, n).inside()) out.push_back({m, n});
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Lattice points (inside or outside) whose admissibility is within
/// `relative_tolerance` of the boundary.
inline std::vector<LatticeIndex> near_boundary(const SourceArrangement& arr,
                                               double relative_tolerance = 1e-6) {
  std::vector<LatticeIndex> out;
  if (!detail::has_ellipse(arr)) return out;
  detail::scan_rectangle(arr, [&](int m, int n) {
    const auto adm = admissibility(arr, m, n);
    if (std::abs(adm.lhs - adm.rhs) <= relative_tolerance * adm.rhs) out.push_back({m, n});
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Twice the ellipse area: k^2 |r2 r3 sin theta3| / 2 pi.
inline double estimate_count(const SourceArrangement& arr) {
  const double k = arr.wavenumber();
  return k * k * std::abs(arr.r2 * arr.r3 * std::sin(arr.theta3)) / two_pi;
}

}  // namespace trivortex
