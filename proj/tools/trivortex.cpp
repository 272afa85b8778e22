// trivortex command-line front end. Lengths are in units of the wavelength,
// angles in degrees.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trivortex/trivortex.hpp"

namespace tv = trivortex;

namespace {

double radians(double deg) { return deg * tv::pi / 180.0; }

struct Options {
  double r2 = 3.0;
  double r3 = 3.0;
  double theta3 = 60.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  std::vector<double> amplitudes{1.0, 1.0, 1.0};
  double z0 = 25.0;
  double center_x = 0.0;
  double center_y = 0.0;
  std::optional<double> half_width;
  std::size_t resolution = 512;
  std::string model = "exact";
  std::vector<std::string> waves;
  std::string kind = "phase";
  std::string out;
  bool raw = false;
  std::optional<double> tolerance;
  // sweep
  std::string parameter = "theta3";
  double from = 0.0;
  double to = 180.0;
  std::size_t steps = 19;
  // trajectories
  std::string family = "m";
  std::vector<int> indices;
  double extent = 50.0;
  std::size_t samples = 101;
};

tv::SourceArrangement arrangement(const Options& o) {
  tv::SourceArrangement arr;
  arr.r2 = o.r2;
  arr.r3 = o.r3;
  arr.theta3 = radians(o.theta3);
  arr.phi2 = radians(o.phi2);
  arr.phi3 = radians(o.phi3);
  arr.amplitudes = {o.amplitudes[0], o.amplitudes[1], o.amplitudes[2]};
  arr.validate();
  return arr;
}

tv::Window window(const Options& o) {
  return {o.center_x, o.center_y, o.half_width.value_or(tv::default_window(o.z0).half_width)};
}

tv::FieldModel model(const std::string& name) {
  static const std::map<std::string, tv::FieldModel> names{{"exact", tv::FieldModel::exact},
                                                           {"farfield", tv::FieldModel::farfield},
                                                           {"planewave", tv::FieldModel::planewave},
                                                           {"pinhole", tv::FieldModel::pinhole}};
  return names.at(name);
}

// amp,kx,ky,kz,phase_deg
tv::PlaneWave parse_wave(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--wave", "not a number: " + item);
  }
  if (v.size() != 5) throw CLI::ValidationError("--wave", "expects amp,kx,ky,kz,phase_deg");
  return {v[0], tv::Vec3{v[1], v[2], v[3]}, radians(v[4])};
}

tv::FieldGrid sample(const Options& o) {
  const auto m = model(o.model);
  if (m == tv::FieldModel::planewave) {
    if (o.waves.empty()) throw CLI::ValidationError("--wave", "planewave model needs --wave");
    std::vector<tv::PlaneWave> waves;
    for (const auto& w : o.waves) waves.push_back(parse_wave(w));
    return tv::sample_grid(waves, window(o), o.resolution, o.z0);
  }
  const auto arr = arrangement(o);
  if (m == tv::FieldModel::pinhole)
    return tv::sample_pinhole_grid(tv::screen_from_arrangement(arr), window(o), o.resolution, o.z0);
  return tv::sample_grid(arr, window(o), o.resolution, m, o.z0);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + o.out);
  f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void run_render(const Options& o) {
  if (o.out.empty()) throw CLI::ValidationError("--out", "render needs an output path");
  static const std::map<std::string, tv::RasterKind> kinds{
      {"amplitude", tv::RasterKind::amplitude},
      {"phase", tv::RasterKind::phase},
      {"phase_bg", tv::RasterKind::phase_bg_subtracted}};
  const auto grid = sample(o);
  const auto kind = kinds.at(o.kind);
  if (grid.model == tv::FieldModel::planewave)
    tv::write_file(o.out, tv::encode_pgm(grid, kind));
  else
    tv::write_raster(grid, kind, o.out, arrangement(o));
}

void run_predict(const Options& o) {
  const auto preds = tv::predict_all(arrangement(o), o.z0);
  emit(o, tv::predictions_to_csv(preds, 1.0));
}

void run_detect(const Options& o) {
  auto grid = sample(o);
  if (!o.raw && grid.model != tv::FieldModel::planewave)
    grid = tv::subtract_background(std::move(grid), arrangement(o));
  emit(o, tv::detections_to_csv(tv::detect_vortices(grid), 1.0));
}

void run_compare(const Options& o) {
  auto cfg = tv::default_compare_config(arrangement(o), o.z0);
  cfg.window = window(o);
  cfg.resolution = o.resolution;
  cfg.model = model(o.model);
  cfg.subtract_background = !o.raw;
  if (o.tolerance) cfg.tolerance = *o.tolerance;
  emit(o, dump(tv::compare_report_json(tv::run_compare(cfg))));
}

void run_ellipse(const Options& o) { emit(o, dump(tv::parameter_space_json(arrangement(o)))); }

// Varies theta3 or one source phase. Phase sweeps also list the hyperbolas
// the cores travel along: varying phi3 moves them along fixed m-curves and
// varying phi2 along fixed n-curves.
void run_sweep(const Options& o) {
  if (o.steps < 1) throw CLI::ValidationError("--steps", "needs at least one step");
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < o.steps; ++i) {
    const double value =
        o.steps == 1 ? o.from : o.from + (o.to - o.from) * static_cast<double>(i) / (o.steps - 1);
    Options step = o;
    if (o.parameter == "theta3") step.theta3 = value;
    else if (o.parameter == "phi2") step.phi2 = value;
    else step.phi3 = value;
    const auto arr = arrangement(step);
    const auto lattice = tv::enumerate_lattice(arr);
    const auto preds = tv::predict_all(arr, o.z0);
    nlohmann::json entry{{"value_deg", value},
                         {"lattice_count", lattice.size()},
                         {"prediction_count", preds.size()},
                         {"estimate_count", tv::estimate_count(arr)}};
    if (o.parameter != "theta3" && !preds.empty()) {
      const char family = o.parameter == "phi3" ? 'm' : 'n';
      // Minus-branch cores are indexed in the phase-negated frame.
      tv::SourceArrangement conjugate = arr;
      conjugate.phi2 = -arr.phi2;
      conjugate.phi3 = -arr.phi3;
      std::set<std::pair<int, int>> seen;
      nlohmann::json curves = nlohmann::json::array();
      for (const auto& p : preds) {
        const int index = family == 'm' ? p.m : p.n;
        const bool plus = p.branch == tv::Branch::plus;
        if (!seen.insert({index, plus}).second) continue;
        if (const auto h = tv::hyperbola_params(family, index, plus ? arr : conjugate, o.z0))
          curves.push_back({{"family", std::string(1, family)},
                            {"branch", tv::to_string(p.branch)},
                            {"index", index},
                            {"scale", h->scale},
                            {"vertex", h->vertex},
                            {"asymptote_theta_rad", h->asymptote_theta}});
      }
      entry["hyperbolas"] = curves;
    }
    steps.push_back(entry);
  }
  emit(o, dump({{"parameter", o.parameter}, {"z0", o.z0}, {"steps", steps}}));
}

void run_trajectories(const Options& o) {
  const auto arr = arrangement(o);
  std::vector<int> indices = o.indices;
  if (indices.empty()) {
    std::set<int> seen;
    for (const auto& p : tv::predict_all(arr, o.z0)) seen.insert(o.family == "m" ? p.m : p.n);
    indices.assign(seen.begin(), seen.end());
  }
  std::string csv = "family,index,primary,x_over_lambda0,y_over_lambda0\n";
  for (int index : indices) {
    for (const auto& curve : tv::sample_trajectory(o.family[0], index, arr, o.z0, o.extent, o.samples))
      for (const auto& [x, y] : curve.points)
        csv += o.family + "," + std::to_string(index) + "," + (curve.primary ? "1" : "0") + "," +
               tv::format_double(x) + "," + tv::format_double(y) + "\n";
  }
  emit(o, csv);
}

void add_arrangement(CLI::App* cmd, Options& o) {
  cmd->add_option("--r2", o.r2, "distance of source 2 from source 1");
  cmd->add_option("--r3", o.r3, "distance of source 3 from source 1");
  cmd->add_option("--theta3", o.theta3, "polar angle of source 3 (deg)");
  cmd->add_option("--phi2", o.phi2, "phase of source 2 (deg)");
  cmd->add_option("--phi3", o.phi3, "phase of source 3 (deg)");
  cmd->add_option("--amplitudes", o.amplitudes, "A1,A2,A3")->expected(3)->delimiter(',');
  cmd->add_option("--z0", o.z0, "observation plane distance")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output path (default stdout)");
}

void add_window(CLI::App* cmd, Options& o) {
  cmd->add_option("--center-x", o.center_x);
  cmd->add_option("--center-y", o.center_y);
  cmd->add_option("--half-width", o.half_width, "window half width (default 0.6 z0)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--resolution", o.resolution, "samples per side")->check(CLI::Range(2, 1 << 14));
  cmd->add_option("--model", o.model)
      ->check(CLI::IsMember({"exact", "farfield", "planewave", "pinhole"}));
  cmd->add_option("--wave", o.waves, "plane wave amp,kx,ky,kz,phase_deg (repeatable)");
  cmd->add_flag("--raw", o.raw, "skip background phase subtraction");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase vortices of three interfering point sources"};
  app.require_subcommand(1);
  Options o;

  auto* render = app.add_subcommand("render", "write an amplitude or phase raster (PGM)");
  add_arrangement(render, o);
  add_window(render, o);
  render->add_option("--kind", o.kind)->check(CLI::IsMember({"amplitude", "phase", "phase_bg"}));

  auto* predict = app.add_subcommand("predict", "far-field vortex positions (CSV)");
  add_arrangement(predict, o);

  auto* detect = app.add_subcommand("detect", "winding-number detection on a raster (CSV)");
  add_arrangement(detect, o);
  add_window(detect, o);

  auto* compare = app.add_subcommand("compare", "predict, sample, detect and match (JSON)");
  add_arrangement(compare, o);
  add_window(compare, o);
  compare->add_option("--tolerance", o.tolerance, "match radius (default 0.02 z0)")
      ->check(CLI::PositiveNumber);

  auto* ellipse = app.add_subcommand("ellipse", "parameter-space ellipse and lattice (JSON)");
  add_arrangement(ellipse, o);

  auto* sweep = app.add_subcommand("sweep", "counts over a theta3 or phase range (JSON)");
  add_arrangement(sweep, o);
  sweep->add_option("--parameter", o.parameter)->check(CLI::IsMember({"theta3", "phi2", "phi3"}));
  sweep->add_option("--from", o.from);
  sweep->add_option("--to", o.to);
  sweep->add_option("--steps", o.steps);

  auto* traj = app.add_subcommand("trajectories", "phase-variation hyperbolas (CSV)");
  add_arrangement(traj, o);
  traj->add_option("--family", o.family)->check(CLI::IsMember({"m", "n"}));
  traj->add_option("--index", o.indices, "curve indices (default: all predicted)");
  traj->add_option("--extent", o.extent)->check(CLI::PositiveNumber);
  traj->add_option("--samples", o.samples)->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*render) run_render(o);
    else if (*predict) run_predict(o);
    else if (*detect) run_detect(o);
    else if (*compare) run_compare(o);
    else if (*ellipse) run_ellipse(o);
    else if (*sweep) run_sweep(o);
    else if (*traj) run_trajectories(o);
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const tv::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
