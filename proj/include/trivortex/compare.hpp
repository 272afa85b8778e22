#pragma once

// Prediction-versus-simulation pipeline and its JSON report.

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trivortex/analytic.hpp"
#include "trivortex/detector.hpp"
#include "trivortex/diffraction.hpp"
#include "trivortex/lattice.hpp"
#include "trivortex/wavefield.hpp"

namespace trivortex {

inline const char* to_string(FieldModel model) {
  switch (model) {
    case FieldModel::exact: return "exact";
    case FieldModel::farfield: return "farfield";
    case FieldModel::planewave: return "planewave";
    case FieldModel::pinhole: return "pinhole";
  }
  return "exact";
}

struct CompareConfig {
  SourceArrangement arrangement;
  double z0 = 25.0;
  Window window{0.0, 0.0, 15.0};
  std::size_t resolution = 512;
  FieldModel model = FieldModel::exact;
  double tolerance = 0.5;
  /// Detect on the background-subtracted field. The factor is smooth and
  /// nowhere zero, so charges are unchanged while the per-pixel phase steps
  /// stay well below pi on coarse rasters.
  bool subtract_background = true;
};

inline CompareConfig default_compare_config(const SourceArrangement& arr, double z0) {
  CompareConfig cfg;
  cfg.arrangement = arr;
  cfg.z0 = z0;
  cfg.window = default_window(z0);
  cfg.tolerance = 0.02 * z0;
  return cfg;
}

struct CompareResult {
  CompareConfig config;
  std::vector<VortexPrediction> predictions;  // all far-field cores
  std::vector<VortexPrediction> in_window;    // the ones inside the sampled area
  std::vector<DetectedVortex> detections;
  MatchReport report;  // indices refer to in_window and detections
};

inline bool inside_grid(const FieldGrid& grid, double x, double y) {
  return x >= grid.x(0) && x <= grid.x(grid.cols - 1) && y >= grid.y(0) &&
         y <= grid.y(grid.rows - 1);
}

inline FieldGrid sample_model(const CompareConfig& cfg) {
  if (cfg.model == FieldModel::pinhole)
    return sample_pinhole_grid(screen_from_arrangement(cfg.arrangement), cfg.window, cfg.resolution,
                               cfg.z0);
  return sample_grid(cfg.arrangement, cfg.window, cfg.resolution, cfg.model, cfg.z0);
}

/// predict -> sample -> detect -> match.
inline CompareResult run_compare(const CompareConfig& cfg) {
  require(cfg.model != FieldModel::planewave, "compare needs a point-source model");
  CompareResult result;
  result.config = cfg;
  if (cfg.arrangement.equal_amplitudes()) result.predictions = predict_all(cfg.arrangement, cfg.z0);

  FieldGrid grid = sample_model(cfg);
  if (cfg.subtract_background) grid = subtract_background(std::move(grid), cfg.arrangement);
  result.detections = detect_vortices(grid);
  for (const auto& p : result.predictions)
    if (inside_grid(grid, p.x, p.y)) result.in_window.push_back(p);
  result.report = match(result.in_window, result.detections, cfg.tolerance);
  return result;
}

inline double degrees(double radians) { return radians * 180.0 / pi; }

inline nlohmann::json to_json(const SourceArrangement& arr) {
  return {{"wavelength", arr.wavelength},
          {"r2", arr.r2},
          {"r3", arr.r3},
          {"theta3_deg", degrees(arr.theta3)},
          {"phi2_deg", degrees(arr.phi2)},
          {"phi3_deg", degrees(arr.phi3)},
          {"amplitudes", arr.amplitudes}};
}

inline nlohmann::json to_json(const EllipseDescriptor& e) {
  const auto& q = e.conic;
  return {{"coefficients", {{"a", q.a}, {"h", q.h}, {"b", q.b}, {"g", q.g}, {"f", q.f}, {"c", q.c}}},
          {"invariants", {{"Delta", e.Delta}, {"delta", e.delta}, {"tau", e.tau}}},
          {"center", {e.m0, e.n0}},
          {"rotation_rad", e.phi_rot},
          {"semi_axes", {e.s_plus, e.s_minus}},
          {"lambda", {e.lambda_plus, e.lambda_minus}},
          {"classification", to_string(classify(e))}};
}

/// Ellipse, bounding rectangle, admissible lattice points and count estimate.
inline nlohmann::json parameter_space_json(const SourceArrangement& arr) {
  const auto e = conic_from_arrangement(arr);
  const auto box = bounding_rectangle(arr);
  const auto shift = lattice_shift(arr.phi2, arr.phi3);
  nlohmann::json points = nlohmann::json::array();
  for (const auto& idx : enumerate_lattice(arr))
    points.push_back({{"m", idx.m}, {"n", idx.n}, {"depth", admissibility(arr, idx.m, idx.n).depth()}});
  nlohmann::json near = nlohmann::json::array();
  for (const auto& idx : near_boundary(arr)) near.push_back({idx.m, idx.n});
  return {{"arrangement", to_json(arr)},
          {"ellipse", to_json(e)},
          {"lattice_shift", {shift.dm, shift.dn}},
          {"bounding_rectangle",
           {{"center", {box.center_m, box.center_n}}, {"widths", {box.width_m, box.width_n}}}},
          {"lattice_points", points},
          {"lattice_count", points.size()},
          {"near_boundary", near},
          {"estimate_count", estimate_count(arr)}};
}

inline nlohmann::json to_json(const VortexPrediction& p, const SourceArrangement& arr) {
  SourceArrangement frame = arr;
  if (p.branch == Branch::minus) frame.phi2 = -arr.phi2, frame.phi3 = -arr.phi3;
  return {{"m", p.m},
          {"n", p.n},
          {"branch", to_string(p.branch)},
          {"theta_rad", p.theta},
          {"r_perp", p.r_perp},
          {"x", p.x},
          {"y", p.y},
          {"ellipse_depth", admissibility(frame, p.m, p.n).depth()}};
}

inline nlohmann::json to_json(const DetectedVortex& d) {
  return {{"charge", d.charge}, {"x", d.x}, {"y", d.y}, {"row", d.row}, {"col", d.col},
          {"min_amp", d.plaquette_min_amplitude}};
}

inline nlohmann::json to_json(const MatchPair& p) {
  return {{"prediction", p.prediction}, {"detection", p.detection}, {"distance", p.distance}};
}

/// Single-file record of a compare run.
inline nlohmann::json compare_report_json(const CompareResult& r) {
  const auto& cfg = r.config;
  const auto& arr = cfg.arrangement;
  nlohmann::json report;
  report["arrangement"] = to_json(arr);
  report["z0"] = cfg.z0;
  report["window"] = {{"center", {cfg.window.center_x, cfg.window.center_y}},
                      {"half_width", cfg.window.half_width}};
  report["resolution"] = cfg.resolution;
  report["model"] = to_string(cfg.model);
  report["background_subtracted"] = cfg.subtract_background;
  report["tolerance"] = cfg.tolerance;
  report["fresnel_number"] = fresnel_number(max_spacing(arr), arr.wavelength, cfg.z0);
  report["parameter_space"] = parameter_space_json(arr);
  report["predictions_available"] = arr.equal_amplitudes();

  nlohmann::json preds = nlohmann::json::array();
  for (const auto& p : r.in_window) preds.push_back(to_json(p, arr));
  report["predictions_in_window"] = preds;
  report["predictions_total"] = r.predictions.size();

  nlohmann::json dets = nlohmann::json::array();
  for (const auto& d : r.detections) dets.push_back(to_json(d));
  report["detections"] = dets;

  nlohmann::json pairs = nlohmann::json::array(), rejected = nlohmann::json::array();
  for (const auto& p : r.report.pairs) pairs.push_back(to_json(p));
  for (const auto& p : r.report.rejected) rejected.push_back(to_json(p));
  report["match"] = {{"pairs", pairs},
                     {"rejected", rejected},
                     {"unmatched_predictions", r.report.unmatched_predictions},
                     {"unmatched_detections", r.report.unmatched_detections},
                     {"rms_residual", r.report.rms_residual},
                     {"max_residual", r.report.max_residual},
                     {"matched", r.report.pairs.size()}};

  // Squared-curve intersections that are not vortices.
  nlohmann::json discarded = nlohmann::json::array();
  if (arr.equal_amplitudes() && !r.predictions.empty()) {
    std::set<LatticeIndex> seen;
    for (const auto& p : r.predictions) {
      if (!seen.insert({p.m, p.n}).second) continue;
      for (const auto& hit : hyperbola_intersections(p.m, p.n, arr, cfg.z0))
        if (!hit.physical)
          discarded.push_back({{"m", p.m}, {"n", p.n}, {"x", hit.x}, {"y", hit.y},
                               {"residual", hit.residual}});
    }
  }
  report["discarded_intersections"] = discarded;
  return report;
}

}  // namespace trivortex
