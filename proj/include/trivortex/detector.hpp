#pragma once

// Vortex detection on sampled fields.
//
// Each plaquette of four neighbouring samples is a closed loop; the sum of
// the principal-value phase steps around it is 2 pi times the enclosed
// topological charge. Cores are then placed at the common zero of the
// bilinear interpolants of Re(psi) and Im(psi) inside the plaquette.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "trivortex/analytic.hpp"
#include "trivortex/wavefield.hpp"

namespace trivortex {

/// Maps a phase difference into (-pi, pi].
inline double wrap_phase_step(double d) {
  d = std::remainder(d, two_pi);
  return d <= -pi ? d + two_pi : d;
}

/// Topological charge of a loop through four phases in counter-clockwise order.
inline int winding_number(std::span<const double, 4> phases) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += wrap_phase_step(phases[(i + 1) % 4] - phases[i]);
  return static_cast<int>(std::lround(sum / two_pi));
}

inline int winding_number(double p0, double p1, double p2, double p3) {
  const std::array<double, 4> p{p0, p1, p2, p3};
  return winding_number(std::span<const double, 4>(p));
}

struct DetectedVortex {
  int charge = 0;
  std::size_t row = 0;  // lower-left sample of the plaquette
  std::size_t col = 0;
  double x = 0.0;
  double y = 0.0;
  double plaquette_min_amplitude = 0.0;
};

namespace detail {

// Condition number of [[a, b], [c, d]] in the 2-norm.
inline double condition_number(double a, double b, double c, double d) {
  const double det = std::abs(a * d - b * c);
  const double frob = a * a + b * b + c * c + d * d;
  if (det == 0.0) return INFINITY;
  const double root = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
  return (frob + root) / (2.0 * det);
}

// Zero of the bilinear interpolant of four complex corners on the unit square;
// corners are (u, v) = (0,0), (1,0), (0,1), (1,1).
inline std::pair<double, double> bilinear_zero(Complex f00, Complex f10, Complex f01,
                                               Complex f11) {
  constexpr double max_condition = 1e8;
  double u = 0.5, v = 0.5;
  for (int iter = 0; iter < 12; ++iter) {
    const Complex f = f00 * (1 - u) * (1 - v) + f10 * u * (1 - v) + f01 * (1 - u) * v + f11 * u * v;
    const Complex fu = (f10 - f00) * (1 - v) + (f11 - f01) * v;
    const Complex fv = (f01 - f00) * (1 - u) + (f11 - f10) * u;
    const double a = fu.real(), b = fv.real(), c = fu.imag(), d = fv.imag();
    if (condition_number(a, b, c, d) > max_condition) {
      if (iter == 0) return {0.5, 0.5};
      break;
    }
    const double det = a * d - b * c;
    const double du = (d * f.real() - b * f.imag()) / det;
    const double dv = (a * f.imag() - c * f.real()) / det;
    u = std::clamp(u - du, 0.0, 1.0);
    v = std::clamp(v - dv, 0.0, 1.0);
    if (std::abs(du) + std::abs(dv) < 1e-14) break;
  }
  return {u, v};
}

}  // namespace detail

/// Scans every plaquette and reports those with non-zero winding, in
/// row-major order.
inline std::vector<DetectedVortex> detect_vortices(const FieldGrid& grid) {
  if (grid.rows < 2 || grid.cols < 2 || grid.values.size() != grid.rows * grid.cols)
    throw Error(Errc::grid_too_small, "detection needs at least a 2x2 raster");
  std::vector<double> phase(grid.values.size());
  std::transform(grid.values.begin(), grid.values.end(), phase.begin(),
                 [](Complex v) { return std::arg(v); });
  const auto at = [&](std::size_t r, std::size_t c) { return phase[r * grid.cols + c]; };

  std::vector<DetectedVortex> out;
  for (std::size_t r = 0; r + 1 < grid.rows; ++r) {
    for (std::size_t c = 0; c + 1 < grid.cols; ++c) {
      const int charge = winding_number(at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c));
      if (charge == 0) continue;
      const Complex f00 = grid(r, c), f10 = grid(r, c + 1);
      const Complex f01 = grid(r + 1, c), f11 = grid(r + 1, c + 1);
      const auto [u, v] = detail::bilinear_zero(f00, f10, f01, f11);
      out.push_back({charge, r, c, grid.x(c) + u * grid.step, grid.y(r) + v * grid.step,
                     std::min({std::abs(f00), std::abs(f10), std::abs(f01), std::abs(f11)})});
    }
  }
  return out;
}

/// Winding of the phase around the boundary of the sample rectangle
/// [row0, row1] x [col0, col1], traversed counter-clockwise. Equals the sum
/// of the charges of the plaquettes it encloses.
inline int loop_winding(const FieldGrid& grid, std::size_t row0, std::size_t col0,
                        std::size_t row1, std::size_t col1) {
  require(row0 < row1 && col0 < col1 && row1 < grid.rows && col1 < grid.cols,
          "loop must enclose at least one plaquette inside the grid");
  double sum = 0.0;
  double prev = std::arg(grid(row0, col0));
  const auto visit = [&](std::size_t r, std::size_t c) {
    const double p = std::arg(grid(r, c));
    sum += wrap_phase_step(p - prev);
    prev = p;
  };
  for (std::size_t c = col0 + 1; c <= col1; ++c) visit(row0, c);
  for (std::size_t r = row0 + 1; r <= row1; ++r) visit(r, col1);
  for (std::size_t c = col1; c-- > col0;) visit(row1, c);
  for (std::size_t r = row1; r-- > row0;) visit(r, col0);
  return static_cast<int>(std::lround(sum / two_pi));
}

/// Newton polish of a zero of a smooth complex field, using a central
/// difference Jacobian with step `h`. Returns empty if it does not converge.
template <class Field>
std::optional<std::pair<double, double>> refine_zero(Field&& field, double x, double y, double h,
                                                     int max_iterations = 50) {
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Complex f = field(x, y);
    const Complex fx = (field(x + h, y) - field(x - h, y)) / (2.0 * h);
    const Complex fy = (field(x, y + h) - field(x, y - h)) / (2.0 * h);
    const double det = fx.real() * fy.imag() - fy.real() * fx.imag();
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double dx = (fy.imag() * f.real() - fy.real() * f.imag()) / det;
    const double dy = (fx.real() * f.imag() - fx.imag() * f.real()) / det;
    x -= dx;
    y -= dy;
    if (std::hypot(dx, dy) < 1e-13 * std::max(1.0, std::hypot(x, y))) return std::make_pair(x, y);
  }
  return std::nullopt;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct MatchPair {
  std::size_t prediction = 0;
  std::size_t detection = 0;
  double distance = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_predictions;
  std::vector<std::size_t> unmatched_detections;
  /// Closest candidate pairs that were turned down only because of the
  /// tolerance; worth a manual look.
  std::vector<MatchPair> rejected;
  double rms_residual = 0.0;  // 0 when nothing matched
  double max_residual = 0.0;
};

/// Greedy one-to-one pairing by ascending distance, ignoring pairs farther
/// apart than `tolerance`.
inline MatchReport match_points(std::span<const Point2> predictions,
                                std::span<const Point2> detections, double tolerance) {
  require(tolerance > 0.0, "match tolerance must be positive");
  std::vector<MatchPair> candidates;
  candidates.reserve(predictions.size() * detections.size());
  for (std::size_t i = 0; i < predictions.size(); ++i)
    for (std::size_t j = 0; j < detections.size(); ++j)
      candidates.push_back({i, j, std::hypot(predictions[i].x - detections[j].x,
                                             predictions[i].y - detections[j].y)});
  std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
    return std::tie(a.distance, a.prediction, a.detection) <
           std::tie(b.distance, b.prediction, b.detection);
  });

  MatchReport report;
  std::vector<bool> used_p(predictions.size()), used_d(detections.size());
  std::vector<bool> flagged(predictions.size());
  double sum_sq = 0.0;
  for (const auto& cand : candidates) {
    if (used_p[cand.prediction] || used_d[cand.detection]) continue;
    if (cand.distance <= tolerance) {
      used_p[cand.prediction] = used_d[cand.detection] = true;
      report.pairs.push_back(cand);
      sum_sq += cand.distance * cand.distance;
      report.max_residual = std::max(report.max_residual, cand.distance);
    } else if (!flagged[cand.prediction]) {
      flagged[cand.prediction] = true;
      report.rejected.push_back(cand);
    }
  }
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (!used_p[i]) report.unmatched_predictions.push_back(i);
  for (std::size_t j = 0; j < detections.size(); ++j)
    if (!used_d[j]) report.unmatched_detections.push_back(j);
  if (!report.pairs.empty())
    report.rms_residual = std::sqrt(sum_sq / static_cast<double>(report.pairs.size()));
  return report;
}

inline MatchReport match(std::span<const VortexPrediction> predictions,
                         std::span<const DetectedVortex> detections, double tolerance) {
  std::vector<Point2> p, d;
  p.reserve(predictions.size());
  d.reserve(detections.size());
  for (const auto& v : predictions) p.push_back({v.x, v.y});
  for (const auto& v : detections) d.push_back({v.x, v.y});
  return match_points(p, d, tolerance);
}

}  // namespace trivortex
