#include "seiscurate/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "seiscurate/geometry.hpp"

namespace seiscurate::synthetic {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ricker(double t, double f) {
  const double a = kPi * f * t;
  return (1.0 - 2.0 * a * a) * std::exp(-a * a);
}

GridGeometry spec_geometry(const SurveySpec& spec) {
  const double theta = spec.crossline_azimuth_deg * kPi / 180.0;
  GridGeometry g;
  g.origin_x = spec.origin_x;
  g.origin_y = spec.origin_y;
  g.xl_dx = std::sin(theta) * spec.xl_spacing_m;
  g.xl_dy = std::cos(theta) * spec.xl_spacing_m;
  g.il_dx = std::sin(theta - kPi / 2.0) * spec.il_spacing_m;
  g.il_dy = std::cos(theta - kPi / 2.0) * spec.il_spacing_m;
  g.inline_min = spec.inline_start;
  g.crossline_min = spec.crossline_start;
  return g;
}

void validate_spec(const SurveySpec& spec) {
  if (spec.layers.empty())
    throw ValidationError("synthetic survey needs at least one layer");
  double prev = 0.0;
  for (const auto& layer : spec.layers) {
    if (!(layer.velocity > 0.0))
      throw ValidationError("layer velocity must be > 0");
    if (!(layer.bottom_depth_m > prev))
      throw ValidationError("layer bottoms must be strictly increasing");
    prev = layer.bottom_depth_m;
  }
  if (spec.wells.size() < 2)
    throw ValidationError("synthetic survey needs at least 2 wells");
  for (const auto& w : spec.wells)
    if (w.frac_inline < 0.0 || w.frac_inline > 1.0 || w.frac_crossline < 0.0 ||
        w.frac_crossline > 1.0)
      throw ValidationError("well " + w.id + " is outside the survey footprint");
  if (spec.n_inline < 2 || spec.n_crossline < 2)
    throw ValidationError("survey grid must be at least 2x2");
  if (!(spec.dt_s > 0.0) || !(spec.t_max_s > spec.dt_s))
    throw ValidationError("invalid time sampling");
}

} // namespace

double layer_twt_at_depth(const std::vector<Layer>& layers, double depth_m) {
  double twt = 0.0;
  double top = 0.0;
  for (const auto& layer : layers) {
    const double bottom = layer.bottom_depth_m;
    if (depth_m <= bottom)
      return twt + 2.0 * (depth_m - top) / layer.velocity;
    twt += 2.0 * (bottom - top) / layer.velocity;
    top = bottom;
  }
  // Below the deepest declared bottom: extend the last layer.
  return twt + 2.0 * (depth_m - top) / layers.back().velocity;
}

std::vector<double> layer_interface_twt(const std::vector<Layer>& layers) {
  std::vector<double> twt;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i)
    twt.push_back(layer_twt_at_depth(layers, layers[i].bottom_depth_m));
  return twt;
}

SurveySpec SurveySpec::demo() {
  SurveySpec spec;
  spec.n_inline = 24;
  spec.t_max_s = 2.2;
  spec.layers = {
      {800.0, 1800.0, 75.0, 2.10, 0.32, 1.8},
      {1800.0, 2400.0, 55.0, 2.35, 0.22, 4.5},
      {2800.0, 3200.0, 40.0, 2.55, 0.12, 20.0},
  };
  spec.wells = {
      {"W1", 0.50, 0.05},
      {"W2", 0.42, 0.18},
      {"W3", 0.56, 0.31},
      {"W4", 0.46, 0.44},
      {"W5", 0.58, 0.57},
      {"W6", 0.44, 0.70},
      {"W7", 0.55, 0.83},
      {"W8", 0.50, 0.95},
  };
  return spec;
}

GeneratedSurvey make_synthetic_survey(const SurveySpec& spec,
                                      const std::filesystem::path& out_dir) {
  validate_spec(spec);
  std::filesystem::create_directories(out_dir);
  GeneratedSurvey out;

  const GridGeometry geometry = spec_geometry(spec);
  const auto n_t = static_cast<std::size_t>(std::llround(spec.t_max_s / spec.dt_s)) + 1;

  // One shared trace: flat layers, Ricker-convolved interface spikes.
  std::vector<double> trace(n_t, 0.0);
  const auto interfaces = layer_interface_twt(spec.layers);
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const double v0 = spec.layers[i].velocity;
    const double v1 = spec.layers[i + 1].velocity;
    const double refl = (v1 - v0) / (v1 + v0);
    const double t0 = interfaces[i];
    const double half_width = 1.5 / spec.ricker_hz;
    for (std::size_t k = 0; k < n_t; ++k) {
      const double t = static_cast<double>(k) * spec.dt_s;
      if (std::abs(t - t0) <= half_width)
        trace[k] += refl * ricker(t - t0, spec.ricker_hz);
    }
  }

  SeismicVolume volume;
  volume.n_inline = static_cast<std::size_t>(spec.n_inline);
  volume.n_crossline = static_cast<std::size_t>(spec.n_crossline);
  volume.n_samples = n_t;
  volume.axis = Axis::time;
  volume.sample_interval = spec.dt_s;
  volume.geometry = geometry;
  volume.crs_tag = "LOCAL-METERS";
  volume.data.resize(volume.trace_count() * n_t);
  for (std::size_t t = 0; t < volume.trace_count(); ++t)
    std::copy(trace.begin(), trace.end(), volume.data.begin() +
                                              static_cast<std::ptrdiff_t>(t * n_t));

  out.segy_path = out_dir / "survey.sgy";
  segy::write_segy(volume, spec.format, out.segy_path);

  // Checkshot stations every interval plus every interface depth.
  const double z_bottom = spec.layers.back().bottom_depth_m;
  std::set<double> stations;
  for (double z = spec.checkshot_interval_m; z <= z_bottom + 1e-9;
       z += spec.checkshot_interval_m)
    stations.insert(z);
  for (const auto& layer : spec.layers)
    if (layer.bottom_depth_m < z_bottom + 1e-9)
      stations.insert(layer.bottom_depth_m);

  well::CheckshotSeries checkshots;
  for (double z : stations) {
    checkshots.depth_m.push_back(z);
    checkshots.twt_s.push_back(layer_twt_at_depth(spec.layers, z));
  }

  // LAS depth grid and per-layer constant curves.
  const double las_step = 0.5;
  std::vector<double> las_depth;
  for (double z = las_step; z <= z_bottom + 1e-9; z += las_step)
    las_depth.push_back(z);
  auto layer_at = [&](double z) -> const Layer& {
    for (const auto& layer : spec.layers)
      if (z <= layer.bottom_depth_m) return layer;
    return spec.layers.back();
  };

  nlohmann::json manifest;
  manifest["wells"] = nlohmann::json::array();
  for (std::size_t w = 0; w < spec.wells.size(); ++w) {
    const auto& ws = spec.wells[w];
    double x, y;
    geometry.xy_at(ws.frac_inline * (spec.n_inline - 1),
                   ws.frac_crossline * (spec.n_crossline - 1), x, y);

    well::WellDataset ds;
    ds.well_id = ws.id;
    ds.surface_x = x;
    ds.surface_y = y;
    ds.has_surface_xy = true;

    auto add_curve = [&](const std::string& mnem, const std::string& unit,
                         auto value_of) {
      well::LogCurve c;
      c.mnemonic = mnem;
      c.unit = unit;
      c.depth_m = las_depth;
      c.values.resize(las_depth.size());
      c.valid.assign(las_depth.size(), 1);
      for (std::size_t i = 0; i < las_depth.size(); ++i)
        c.values[i] = value_of(layer_at(las_depth[i]));
      ds.curves.push_back(std::move(c));
    };
    add_curve("GR", "API", [](const Layer& l) { return l.gamma_api; });
    add_curve("RHOB", "G/C3", [](const Layer& l) { return l.density_gcc; });
    add_curve("NPHI", "V/V", [](const Layer& l) { return l.neutron_frac; });
    add_curve("DT", "US/M", [](const Layer& l) { return 1e6 / l.velocity; });
    add_curve("RT", "OHMM", [](const Layer& l) { return l.resistivity_ohmm; });

    // Second well carries a wide null gap to exercise mask handling.
    if (w == 1) {
      auto& gr = ds.curves.front();
      for (std::size_t i = 0; i < las_depth.size(); ++i)
        if (las_depth[i] > 1200.0 && las_depth[i] < 1320.0) {
          gr.values[i] = -999.25;
          gr.valid[i] = 0;
        }
    }

    const auto las_path = out_dir / (ws.id + ".las");
    const auto cks_path = out_dir / (ws.id + "_checkshot.csv");
    well::write_las(ds, las_path);
    well::write_checkshot_csv(checkshots, cks_path,
                              {well::CheckshotUnits::TimeUnit::milliseconds,
                               well::CheckshotUnits::TimeKind::two_way});
    out.las_paths.push_back(las_path);
    out.checkshot_paths.push_back(cks_path);

    manifest["wells"].push_back(
        {{"well_id", ws.id},
         {"surface_x", x},
         {"surface_y", y},
         {"datum_shift_m", 0.0},
         {"las", ws.id + ".las"},
         {"checkshot", ws.id + "_checkshot.csv"},
         {"checkshot_units", {{"time", "ms"}, {"kind", "two_way"}}}});
  }

  out.manifest_path = out_dir / "wells.json";
  {
    std::ofstream f(out.manifest_path, std::ios::trunc);
    f << manifest.dump(2) << "\n";
  }

  nlohmann::json config;
  config["survey_id"] = spec.survey_id;
  config["segy_path"] = "survey.sgy";
  config["well_manifest"] = "wells.json";
  config["crs_tag"] = "LOCAL-METERS";
  config["hull_k"] = 8;
  config["rbf"] = {{"kernel", "thin_plate"},
                   {"epsilon", 1.0},
                   {"smoothing", 0.0},
                   {"constant_extension", false},
                   {"extension_radius", 0.0}};
  config["clamps"] = {{"v_floor", 1400.0}, {"v_ceil", 7000.0}};
  config["depth"] = {{"dz", 6.25}, {"z_max", 0.0}};
  config["sections"] = {{"lateral_step", 6.25}, {"lines", "auto"}};
  config["taper"] = {{"pass_fraction", 0.8}, {"taper_fraction", 0.2}};
  config["log_gap_threshold_m"] = 50.0;
  config["output_dir"] = "out";
  out.config_path = out_dir / "config.json";
  {
    std::ofstream f(out.config_path, std::ios::trunc);
    f << config.dump(2) << "\n";
  }
  return out;
}

SurveySpec spec_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
  }
  SurveySpec spec = SurveySpec::demo();
  spec.layers.clear();
  spec.wells.clear();
  spec.survey_id = j.value("survey_id", spec.survey_id);
  spec.n_inline = j.value("n_inline", spec.n_inline);
  spec.n_crossline = j.value("n_crossline", spec.n_crossline);
  spec.inline_start = j.value("inline_start", spec.inline_start);
  spec.crossline_start = j.value("crossline_start", spec.crossline_start);
  spec.il_spacing_m = j.value("il_spacing_m", spec.il_spacing_m);
  spec.xl_spacing_m = j.value("xl_spacing_m", spec.xl_spacing_m);
  spec.origin_x = j.value("origin_x", spec.origin_x);
  spec.origin_y = j.value("origin_y", spec.origin_y);
  spec.crossline_azimuth_deg = j.value("crossline_azimuth_deg", spec.crossline_azimuth_deg);
  spec.dt_s = j.value("dt_s", spec.dt_s);
  spec.t_max_s = j.value("t_max_s", spec.t_max_s);
  spec.ricker_hz = j.value("ricker_hz", spec.ricker_hz);
  spec.checkshot_interval_m = j.value("checkshot_interval_m", spec.checkshot_interval_m);
  for (const auto& lj : j.at("layers")) {
    Layer layer;
    layer.bottom_depth_m = lj.at("bottom_depth_m").get<double>();
    layer.velocity = lj.at("velocity").get<double>();
    layer.gamma_api = lj.value("gamma_api", layer.gamma_api);
    layer.density_gcc = lj.value("density_gcc", layer.density_gcc);
    layer.neutron_frac = lj.value("neutron_frac", layer.neutron_frac);
    layer.resistivity_ohmm = lj.value("resistivity_ohmm", layer.resistivity_ohmm);
    spec.layers.push_back(layer);
  }
  for (const auto& wj : j.at("wells")) {
    WellSpec w;
    w.id = wj.at("id").get<std::string>();
    w.frac_inline = wj.value("frac_inline", 0.5);
    w.frac_crossline = wj.value("frac_crossline", 0.5);
    spec.wells.push_back(w);
  }
  return spec;
}

} // namespace seiscurate::synthetic
