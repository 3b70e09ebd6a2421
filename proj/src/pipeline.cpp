#include "seiscurate/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "seiscurate/depth_convert.hpp"
#include "seiscurate/geometry.hpp"
#include "seiscurate/section.hpp"

namespace seiscurate::pipeline {

namespace {

using nlohmann::json;

json read_json_artifact(const std::filesystem::path& path,
                        const std::string& stage) {
  std::ifstream in(path);
  if (!in)
    throw StageError(stage, path.string(),
                     "missing upstream artifact (run the previous stage first)");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw StageError(stage, path.string(), std::string("corrupt artifact: ") + e.what());
  }
  return j;
}

void write_json_artifact(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Tile contract: 256 x 512 at 12.5 m fixes the physical window.
constexpr double kTileLateralMeters = store::kTileLateral * store::kTileSpacing;
constexpr double kTileDepthMeters = store::kTileDepth * store::kTileSpacing;

json geometry_to_json(const GridGeometry& g) {
  return {{"origin_x", g.origin_x}, {"origin_y", g.origin_y},
          {"il_dx", g.il_dx},       {"il_dy", g.il_dy},
          {"xl_dx", g.xl_dx},       {"xl_dy", g.xl_dy},
          {"inline_min", g.inline_min}, {"crossline_min", g.crossline_min}};
}

GridGeometry geometry_from_json(const json& j) {
  GridGeometry g;
  g.origin_x = j.at("origin_x").get<double>();
  g.origin_y = j.at("origin_y").get<double>();
  g.il_dx = j.at("il_dx").get<double>();
  g.il_dy = j.at("il_dy").get<double>();
  g.xl_dx = j.at("xl_dx").get<double>();
  g.xl_dy = j.at("xl_dy").get<double>();
  g.inline_min = j.at("inline_min").get<int>();
  g.crossline_min = j.at("crossline_min").get<int>();
  return g;
}

struct RectArtifact {
  geom::RectRegion rect;
  GridGeometry geometry;
  std::size_t n_samples = 0;
  double dt = 0.0;
};

RectArtifact load_rect(const StagePaths& paths, const std::string& stage) {
  const json j = read_json_artifact(paths.rect_json(), stage);
  RectArtifact a;
  a.rect.inline_min = j.at("rect").at("inline_min").get<int>();
  a.rect.inline_max = j.at("rect").at("inline_max").get<int>();
  a.rect.crossline_min = j.at("rect").at("crossline_min").get<int>();
  a.rect.crossline_max = j.at("rect").at("crossline_max").get<int>();
  a.geometry = geometry_from_json(j.at("geometry"));
  a.n_samples = j.at("n_samples").get<std::size_t>();
  a.dt = j.at("dt_s").get<double>();
  return a;
}

segy::TraceTable load_scan_table(const StagePaths& paths,
                                 const std::string& stage) {
  const json j = read_json_artifact(paths.scan_json(), stage);
  segy::TraceTable table;
  std::int64_t index = 0;
  for (const auto& row : j.at("traces")) {
    segy::TraceHeader th;
    th.inline_no = row.at(0).get<int>();
    th.crossline_no = row.at(1).get<int>();
    th.cdp_x = row.at(2).get<double>();
    th.cdp_y = row.at(3).get<double>();
    th.trace_index = index++;
    table.rows.push_back(th);
  }
  for (const auto& d : j.at("duplicates"))
    table.duplicates.push_back({d.at("inline").get<int>(),
                                d.at("crossline").get<int>(),
                                d.at("first_index").get<std::int64_t>(),
                                d.at("duplicate_index").get<std::int64_t>()});
  return table;
}

struct LoadedWell {
  well::WellDataset data;
  geom::WellLocation location;
};

std::vector<LoadedWell> load_wells_located(const Config& config,
                                           const RectArtifact& rect,
                                           const std::string& stage) {
  std::vector<LoadedWell> wells;
  for (const auto& entry : well::load_well_manifest(config.well_manifest)) {
    if (!entry.las_path.empty() && !std::filesystem::exists(entry.las_path))
      throw StageError(stage, entry.las_path.string(),
                       "well " + entry.well_id + ": LAS file not found");
    if (!entry.checkshot_path.empty() &&
        !std::filesystem::exists(entry.checkshot_path))
      throw StageError(stage, entry.checkshot_path.string(),
                       "well " + entry.well_id + ": checkshot file not found");
    LoadedWell lw;
    lw.data = well::load_well(entry);
    if (config.has_well_crs_transform) {
      const auto moved = geom::apply_crs(
          {{lw.data.surface_x, lw.data.surface_y}}, config.well_crs_transform);
      lw.data.surface_x = moved[0].x;
      lw.data.surface_y = moved[0].y;
    }
    lw.location =
        geom::locate_well(lw.data.surface_x, lw.data.surface_y, rect.geometry,
                          rect.rect.n_inline(), rect.rect.n_crossline());
    wells.push_back(std::move(lw));
  }
  return wells;
}

SeismicVolume section_to_volume(const section::Section& sec,
                                const std::string& crs_tag) {
  SeismicVolume v;
  v.n_inline = sec.n_lateral;
  v.n_crossline = 1;
  v.n_samples = sec.n_depth;
  v.axis = Axis::depth;
  v.sample_interval = sec.dz;
  v.crs_tag = crs_tag;
  // Chord-direction affine; exact per-sample positions live in the
  // sidecar JSON.
  const Point a = sec.sample_xy.front();
  const Point b = sec.sample_xy.back();
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const double ux = len > 0 ? (b.x - a.x) / len : 1.0;
  const double uy = len > 0 ? (b.y - a.y) / len : 0.0;
  v.geometry.origin_x = a.x;
  v.geometry.origin_y = a.y;
  v.geometry.il_dx = ux * sec.lateral_step;
  v.geometry.il_dy = uy * sec.lateral_step;
  v.geometry.xl_dx = -uy * sec.lateral_step;
  v.geometry.xl_dy = ux * sec.lateral_step;
  v.data = sec.amplitudes;
  return v;
}

std::string line_id_of(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "line_%03zu", index);
  return buf;
}

} // namespace

void Config::validate() const {
  if (survey_id.empty()) throw ValidationError("config: survey_id is empty");
  if (segy_path.empty()) throw ValidationError("config: segy_path is empty");
  if (well_manifest.empty()) throw ValidationError("config: well_manifest is empty");
  if (output_dir.empty()) throw ValidationError("config: output_dir is empty");
  if (hull_k < 3) throw ValidationError("config: hull_k must be >= 3");
  if (!(v_floor > 0.0) || !(v_ceil > v_floor))
    throw ValidationError("config: need 0 < v_floor < v_ceil");
  taper.validate();
  if (!(dz > 0.0) || dz > store::kTileSpacing + 1e-12)
    throw ValidationError("config: dz must be in (0, 12.5]");
  if (!(lateral_step > 0.0) || lateral_step > store::kTileSpacing + 1e-12)
    throw ValidationError("config: lateral_step must be in (0, 12.5]");
  const double n_dep = kTileDepthMeters / dz;
  if (std::abs(n_dep - std::round(n_dep)) > 1e-6)
    throw ValidationError("config: dz must divide the 6400 m tile depth evenly");
  const double n_lat = kTileLateralMeters / lateral_step;
  if (std::abs(n_lat - std::round(n_lat)) > 1e-6)
    throw ValidationError("config: lateral_step must divide the 3200 m tile width evenly");
  if (z_max < 0.0) throw ValidationError("config: z_max must be >= 0");
  if (rbf_smoothing < 0.0) throw ValidationError("config: rbf smoothing must be >= 0");
  if (log_gap_threshold_m <= 0.0)
    throw ValidationError("config: log_gap_threshold_m must be > 0");
}

std::string Config::hash() const {
  json j;
  j["survey_id"] = survey_id;
  j["segy_path"] = segy_path_as_written.empty() ? segy_path.string()
                                                : segy_path_as_written;
  j["well_manifest"] = well_manifest_as_written.empty()
                           ? well_manifest.string()
                           : well_manifest_as_written;
  j["crs_tag"] = crs_tag;
  if (has_well_crs_transform)
    j["well_crs_transform"] = {well_crs_transform.m00, well_crs_transform.m01,
                               well_crs_transform.m10, well_crs_transform.m11,
                               well_crs_transform.tx,  well_crs_transform.ty};
  j["header_offsets"] = {header_offsets.inline_no, header_offsets.crossline_no,
                         header_offsets.cdp_x, header_offsets.cdp_y,
                         header_offsets.coord_scalar};
  j["hull_k"] = hull_k;
  j["kernel"] = vel::kernel_name(kernel);
  j["rbf_epsilon"] = rbf_epsilon;
  j["rbf_smoothing"] = rbf_smoothing;
  j["constant_extension"] = constant_extension;
  j["extension_radius"] = extension_radius;
  j["v_floor"] = v_floor;
  j["v_ceil"] = v_ceil;
  j["dz"] = dz;
  j["z_max"] = z_max;
  j["lateral_step"] = lateral_step;
  j["lines"] = lines;
  j["taper"] = {taper.pass_fraction, taper.taper_fraction};
  j["log_gap_threshold_m"] = log_gap_threshold_m;
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
  }
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  Config c;
  c.survey_id = j.at("survey_id").get<std::string>();
  c.segy_path_as_written = j.at("segy_path").get<std::string>();
  c.well_manifest_as_written = j.at("well_manifest").get<std::string>();
  c.segy_path = resolve(c.segy_path_as_written);
  c.well_manifest = resolve(c.well_manifest_as_written);
  c.crs_tag = j.value("crs_tag", "");
  if (j.contains("well_crs_transform")) {
    const auto& t = j["well_crs_transform"];
    const auto m = t.at("matrix").get<std::array<double, 4>>();
    const auto tr = t.value("translate", std::array<double, 2>{0.0, 0.0});
    c.well_crs_transform = {m[0], m[1], m[2], m[3], tr[0], tr[1]};
    if (std::abs(c.well_crs_transform.det()) < 1e-15)
      throw ValidationError("config: well_crs_transform is not invertible");
    c.has_well_crs_transform = true;
  }
  if (j.contains("header_offsets")) {
    const auto& h = j["header_offsets"];
    c.header_offsets.inline_no = h.value("inline_no", c.header_offsets.inline_no);
    c.header_offsets.crossline_no =
        h.value("crossline_no", c.header_offsets.crossline_no);
    c.header_offsets.cdp_x = h.value("cdp_x", c.header_offsets.cdp_x);
    c.header_offsets.cdp_y = h.value("cdp_y", c.header_offsets.cdp_y);
    c.header_offsets.coord_scalar =
        h.value("coord_scalar", c.header_offsets.coord_scalar);
  }
  c.hull_k = j.value("hull_k", c.hull_k);
  if (j.contains("rbf")) {
    const auto& r = j["rbf"];
    c.kernel = vel::kernel_from_name(r.value("kernel", "thin_plate"));
    c.rbf_epsilon = r.value("epsilon", c.rbf_epsilon);
    c.rbf_smoothing = r.value("smoothing", c.rbf_smoothing);
    c.constant_extension = r.value("constant_extension", false);
    c.extension_radius = r.value("extension_radius", 0.0);
  }
  if (j.contains("clamps")) {
    c.v_floor = j["clamps"].value("v_floor", c.v_floor);
    c.v_ceil = j["clamps"].value("v_ceil", c.v_ceil);
  }
  if (j.contains("depth")) {
    c.dz = j["depth"].value("dz", c.dz);
    c.z_max = j["depth"].value("z_max", 0.0);
  }
  if (j.contains("sections")) {
    c.lateral_step = j["sections"].value("lateral_step", c.lateral_step);
    if (j["sections"].contains("lines") && j["sections"]["lines"].is_array())
      c.lines = j["sections"]["lines"].get<std::vector<std::vector<std::string>>>();
  }
  if (j.contains("taper")) {
    c.taper.pass_fraction = j["taper"].value("pass_fraction", 0.8);
    c.taper.taper_fraction = j["taper"].value("taper_fraction", 0.2);
  }
  c.log_gap_threshold_m = j.value("log_gap_threshold_m", 50.0);
  c.output_dir = resolve(j.value("output_dir", "out"));
  c.validate();
  return c;
}

DirectoryLock::DirectoryLock(const std::filesystem::path& lock_path)
    : path_(lock_path) {
  std::filesystem::create_directories(lock_path.parent_path());
  std::FILE* f = std::fopen(lock_path.string().c_str(), "wx");
  if (!f)
    throw Error("output directory is locked by another pipeline process (" +
                lock_path.string() + "); remove the lock file if stale");
  std::fputs("seiscurate\n", f);
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

void stage_scan(const Config& config, const StagePaths& paths) {
  try {
    std::filesystem::create_directories(paths.out);
    segy::Reader reader(config.segy_path, config.header_offsets);
    const segy::TraceTable table = segy::scan_geometry(reader);

    json j;
    j["segy_path"] = config.segy_path_as_written;
    j["n_traces"] = table.rows.size();
    j["n_samples"] = reader.header().samples_per_trace;
    j["dt_s"] = reader.header().axis == Axis::time
                    ? reader.header().sample_interval_us * 1e-6
                    : reader.header().sample_interval_us * 1e-3;
    j["format_code"] = static_cast<int>(reader.header().format);
    json traces = json::array();
    std::vector<int> ils, xls;
    for (const auto& row : table.rows) {
      traces.push_back({row.inline_no, row.crossline_no, row.cdp_x, row.cdp_y});
      ils.push_back(row.inline_no);
      xls.push_back(row.crossline_no);
    }
    j["traces"] = std::move(traces);
    json dups = json::array();
    for (const auto& d : table.duplicates)
      dups.push_back({{"inline", d.inline_no},
                      {"crossline", d.crossline_no},
                      {"first_index", d.first_index},
                      {"duplicate_index", d.duplicate_index}});
    j["duplicates"] = std::move(dups);
    write_json_artifact(j, paths.scan_json());

    const auto grid = geom::occupancy_from_positions(ils, xls);
    std::ofstream pgm(paths.occupancy_pgm(), std::ios::trunc);
    pgm << geom::occupancy_to_pgm(grid);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("scan", config.segy_path.string(), e.what());
  }
}

void stage_rect(const Config& config, const StagePaths& paths) {
  try {
    const segy::TraceTable table = load_scan_table(paths, "rect");
    const json scan = read_json_artifact(paths.scan_json(), "rect");

    std::vector<int> ils, xls;
    std::vector<Point> positions;
    for (const auto& row : table.rows) {
      ils.push_back(row.inline_no);
      xls.push_back(row.crossline_no);
      positions.push_back({row.cdp_x, row.cdp_y});
    }
    const auto grid = geom::occupancy_from_positions(ils, xls);
    const auto rect = geom::largest_full_rectangle(grid);
    const auto geometry = segy::fit_grid_geometry(table, rect);
    const auto footprint = geom::concave_hull(positions, config.hull_k);

    // Spacing QC: fit residuals beyond 1% of the median increment.
    const double increment =
        std::min(std::hypot(geometry.il_dx, geometry.il_dy),
                 std::hypot(geometry.xl_dx, geometry.xl_dy));
    std::vector<std::string> spacing_flags;
    for (const auto& row : table.rows) {
      if (row.inline_no < rect.inline_min || row.inline_no > rect.inline_max ||
          row.crossline_no < rect.crossline_min ||
          row.crossline_no > rect.crossline_max)
        continue;
      double px, py;
      geometry.xy_at(row.inline_no - rect.inline_min,
                     row.crossline_no - rect.crossline_min, px, py);
      const double dev = std::hypot(px - row.cdp_x, py - row.cdp_y);
      if (dev > 0.01 * increment && spacing_flags.size() < 100)
        spacing_flags.push_back(
            "trace (" + std::to_string(row.inline_no) + "," +
            std::to_string(row.crossline_no) + ") deviates " +
            std::to_string(dev) + " m from the fitted grid");
    }

    json j;
    j["rect"] = {{"inline_min", rect.inline_min},
                 {"inline_max", rect.inline_max},
                 {"crossline_min", rect.crossline_min},
                 {"crossline_max", rect.crossline_max}};
    j["geometry"] = geometry_to_json(geometry);
    j["n_samples"] = scan.at("n_samples");
    j["dt_s"] = scan.at("dt_s");
    json hull = json::array();
    for (const auto& p : footprint.hull_polygon) hull.push_back({p.x, p.y});
    j["hull"] = std::move(hull);
    j["hull_k"] = footprint.concavity_parameter;
    j["hull_convex_fallback"] = footprint.convex_fallback;
    j["spacing_flags"] = spacing_flags;
    j["duplicate_count"] = table.duplicates.size();
    write_json_artifact(j, paths.rect_json());
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("rect", paths.scan_json().string(), e.what());
  }
}

void stage_fit(const Config& config, const StagePaths& paths,
               std::size_t threads) {
  try {
    const RectArtifact rect = load_rect(paths, "fit");
    const auto wells = load_wells_located(config, rect, "fit");
    const double t_max = static_cast<double>(rect.n_samples - 1) * rect.dt;

    // Normalization extent: rectangle corners and the time range.
    vel::CoordScaler scaler;
    {
      double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
      for (int corner = 0; corner < 4; ++corner) {
        const double fi = (corner & 1) ? static_cast<double>(rect.rect.n_inline() - 1) : 0.0;
        const double fx = (corner & 2) ? static_cast<double>(rect.rect.n_crossline() - 1) : 0.0;
        double x, y;
        rect.geometry.xy_at(fi, fx, x, y);
        if (corner == 0) {
          min_x = max_x = x;
          min_y = max_y = y;
        } else {
          min_x = std::min(min_x, x);
          max_x = std::max(max_x, x);
          min_y = std::min(min_y, y);
          max_y = std::max(max_y, y);
        }
      }
      scaler.min = {min_x, min_y, 0.0};
      scaler.max = {max_x, max_y, std::max(t_max, 1e-9)};
    }

    std::vector<vel::VelocitySample> samples;
    std::vector<vel::QcWellInput> qc_inputs;
    std::vector<std::string> excluded;
    std::size_t wells_in_fit = 0;
    for (const auto& lw : wells) {
      if (!lw.data.checkshots) continue;
      if (!lw.location.inside) {
        excluded.push_back(lw.data.well_id);
        qc_inputs.push_back({lw.data.well_id, lw.data.surface_x,
                             lw.data.surface_y, *lw.data.checkshots});
        continue;
      }
      ++wells_in_fit;
      for (const auto& s : well::average_velocity(*lw.data.checkshots))
        samples.push_back(
            {scaler.normalize({lw.data.surface_x, lw.data.surface_y, s.twt_s}),
             s.v_avg});
      qc_inputs.push_back({lw.data.well_id, lw.data.surface_x,
                           lw.data.surface_y, *lw.data.checkshots});
    }
    if (wells_in_fit == 0)
      throw Error("no wells with checkshots inside the rectangle: cannot fit");

    const auto model = vel::fit_rbf(samples, config.kernel, config.rbf_smoothing,
                                    config.rbf_epsilon, scaler);
    json mj = model.to_json();
    mj["t_max_s"] = t_max;
    mj["config_hash"] = config.hash();
    write_json_artifact(mj, paths.model_json());

    // Velocity volume on the rectangle grid.
    SeismicVolume grid_template;
    grid_template.n_inline = rect.rect.n_inline();
    grid_template.n_crossline = rect.rect.n_crossline();
    grid_template.n_samples = rect.n_samples;
    grid_template.axis = Axis::time;
    grid_template.sample_interval = rect.dt;
    grid_template.geometry = rect.geometry;
    grid_template.crs_tag = config.crs_tag;

    vel::VolumeBuildOptions opts;
    opts.v_floor = config.v_floor;
    opts.v_ceil = config.v_ceil;
    opts.constant_extension = config.constant_extension;
    opts.extension_radius = config.extension_radius;
    opts.threads = threads;
    const auto velocity = vel::build_velocity_volume(model, grid_template, opts);
    segy::write_segy(velocity.volume, segy::SampleFormat::ieee_float32,
                     paths.vel_segy(), config.header_offsets);

    const auto qc = vel::qc_compare_at_wells(model, qc_inputs, rect.geometry,
                                             rect.rect.n_inline(),
                                             rect.rect.n_crossline(), opts);
    json qj;
    qj["clamp_count"] = velocity.clamp_count;
    qj["excluded_wells"] = excluded;
    json well_summaries = json::array();
    for (const auto& w : qc.wells)
      well_summaries.push_back({{"well_id", w.well_id},
                                {"inside", w.inside},
                                {"sample_count", w.sample_count},
                                {"max_rel_err", w.max_rel_err},
                                {"mean_rel_err", w.mean_rel_err}});
    qj["wells"] = std::move(well_summaries);
    json rows = json::array();
    for (const auto& r : qc.rows)
      rows.push_back({r.well_id, r.depth_m, r.twt_s, r.v_checkshot, r.v_interp,
                      r.rel_err});
    qj["rows"] = std::move(rows);
    write_json_artifact(qj, paths.fit_qc_json());
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("fit", config.well_manifest.string(), e.what());
  }
}

void stage_convert(const Config& config, const StagePaths& paths,
                   std::size_t threads) {
  try {
    const RectArtifact rect = load_rect(paths, "convert");
    const segy::TraceTable table = load_scan_table(paths, "convert");
    if (!std::filesystem::exists(paths.vel_segy()))
      throw StageError("convert", paths.vel_segy().string(),
                       "missing upstream artifact (run fit first)");

    segy::Reader reader(config.segy_path, config.header_offsets);
    const SeismicVolume seismic = segy::assemble_volume(reader, table, rect.rect);
    vel::VelocityVolume velocity;
    velocity.volume = segy::read_volume(paths.vel_segy(), config.header_offsets);
    velocity.volume.axis = Axis::time;

    depth::ConvertOptions opts;
    opts.dz = config.dz;
    opts.z_max = config.z_max;
    opts.v_floor = config.v_floor;
    opts.v_ceil = config.v_ceil;
    opts.threads = threads;
    depth::ConvertStats stats;
    const SeismicVolume depth_volume =
        depth::convert_volume(seismic, velocity, opts, &stats);
    segy::write_segy(depth_volume, segy::SampleFormat::ieee_float32,
                     paths.depth_segy(), config.header_offsets);

    json j;
    j["clamp_count"] = stats.clamp_count;
    j["z_max"] = stats.z_max;
    j["dz"] = config.dz;
    write_json_artifact(j, paths.convert_qc_json());
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("convert", config.segy_path.string(), e.what());
  }
}

void stage_extract(const Config& config, const StagePaths& paths) {
  try {
    const RectArtifact rect = load_rect(paths, "extract");
    if (!std::filesystem::exists(paths.depth_segy()))
      throw StageError("extract", paths.depth_segy().string(),
                       "missing upstream artifact (run convert first)");
    const SeismicVolume depth_volume =
        segy::read_volume(paths.depth_segy(), config.header_offsets);

    const auto wells = load_wells_located(config, rect, "extract");
    std::vector<Point> inside_xy;
    std::vector<std::string> inside_ids;
    for (const auto& lw : wells) {
      if (lw.location.inside) {
        inside_xy.push_back({lw.data.surface_x, lw.data.surface_y});
        inside_ids.push_back(lw.data.well_id);
      }
    }

    std::vector<section::QuasiLine> lines;
    if (config.lines.empty()) {
      const auto ordered = section::order_wells(inside_xy);
      std::vector<Point> xy;
      std::vector<std::string> ids;
      for (std::size_t i : ordered.order) {
        xy.push_back(inside_xy[i]);
        ids.push_back(inside_ids[i]);
      }
      lines.push_back(section::make_line(xy, ids));
    } else {
      for (const auto& id_list : config.lines) {
        std::vector<Point> xy;
        std::vector<std::string> ids;
        for (const auto& id : id_list) {
          const auto it = std::find(inside_ids.begin(), inside_ids.end(), id);
          if (it == inside_ids.end())
            throw Error("line well '" + id +
                        "' is unknown or outside the rectangle");
          xy.push_back(inside_xy[static_cast<std::size_t>(it - inside_ids.begin())]);
          ids.push_back(id);
        }
        lines.push_back(section::make_line(xy, ids));
      }
    }

    // Stale sections from a previous configuration must not leak into
    // the pack stage.
    std::filesystem::remove_all(paths.sections_dir());
    std::filesystem::create_directories(paths.sections_dir());
    section::ExtractOptions opts;
    opts.lateral_step = config.lateral_step;
    opts.window_length = kTileLateralMeters;
    opts.n_depth =
        static_cast<std::size_t>(std::llround(kTileDepthMeters / config.dz));
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const auto sec = section::extract_section(depth_volume, lines[li], opts);
      const std::string id = line_id_of(li);
      segy::write_segy(section_to_volume(sec, config.crs_tag),
                       segy::SampleFormat::ieee_float32,
                       paths.sections_dir() / (id + ".sgy"),
                       config.header_offsets);
      json j;
      j["line_id"] = id;
      j["well_ids"] = lines[li].well_ids;
      json ticks = json::array();
      for (const auto& t : sec.well_ticks)
        ticks.push_back({{"well_id", t.well_id},
                         {"lateral_index", t.lateral_index}});
      j["ticks"] = std::move(ticks);
      j["clipped_samples"] = sec.clipped_samples;
      j["n_lateral"] = sec.n_lateral;
      j["n_depth"] = sec.n_depth;
      j["lateral_step"] = sec.lateral_step;
      j["dz"] = sec.dz;
      json verts = json::array();
      for (const auto& p : lines[li].vertices) verts.push_back({p.x, p.y});
      j["vertices"] = std::move(verts);
      write_json_artifact(j, paths.sections_dir() / (id + ".json"));
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("extract", paths.depth_segy().string(), e.what());
  }
}

void stage_resample(const Config& config, const StagePaths& paths) {
  try {
    if (!std::filesystem::is_directory(paths.sections_dir()))
      throw StageError("resample", paths.sections_dir().string(),
                       "missing upstream artifact (run extract first)");
    std::filesystem::remove_all(paths.resampled_dir());
    std::filesystem::create_directories(paths.resampled_dir());

    std::vector<std::filesystem::path> metas;
    for (const auto& entry :
         std::filesystem::directory_iterator(paths.sections_dir()))
      if (entry.path().extension() == ".json") metas.push_back(entry.path());
    std::sort(metas.begin(), metas.end());
    if (metas.empty())
      throw StageError("resample", paths.sections_dir().string(),
                       "no extracted sections found");

    for (const auto& meta_path : metas) {
      const json meta = read_json_artifact(meta_path, "resample");
      const std::string id = meta.at("line_id").get<std::string>();
      const SeismicVolume sec_volume = segy::read_volume(
          paths.sections_dir() / (id + ".sgy"), config.header_offsets);
      const std::size_t n_lat = sec_volume.n_inline;
      const std::size_t n_dep = sec_volume.n_samples;
      if (n_lat < store::kTileLateral || n_dep < store::kTileDepth)
        throw Error("section " + id + " is smaller than the 256x512 target");

      const auto resampled = resample::fft_resample_2d(
          sec_volume.data, n_lat, n_dep, store::kTileLateral, store::kTileDepth,
          config.taper);

      SeismicVolume out;
      out.n_inline = store::kTileLateral;
      out.n_crossline = 1;
      out.n_samples = store::kTileDepth;
      out.axis = Axis::depth;
      out.sample_interval = store::kTileSpacing;
      out.crs_tag = config.crs_tag;
      const double ratio = static_cast<double>(n_lat) /
                           static_cast<double>(store::kTileLateral);
      out.geometry = sec_volume.geometry;
      out.geometry.il_dx *= ratio;
      out.geometry.il_dy *= ratio;
      out.data = resampled;
      segy::write_segy(out, segy::SampleFormat::ieee_float32,
                       paths.resampled_dir() / (id + ".sgy"),
                       config.header_offsets);

      json j = meta;
      j["n_lateral"] = store::kTileLateral;
      j["n_depth"] = store::kTileDepth;
      j["lateral_step"] = store::kTileSpacing;
      j["dz"] = store::kTileSpacing;
      json ticks = json::array();
      for (const auto& t : meta.at("ticks")) {
        const auto lat = t.at("lateral_index").get<double>();
        const auto scaled = static_cast<std::size_t>(std::min<double>(
            std::llround(lat / ratio),
            static_cast<double>(store::kTileLateral - 1)));
        ticks.push_back({{"well_id", t.at("well_id")},
                         {"lateral_index", scaled}});
      }
      j["ticks"] = std::move(ticks);
      write_json_artifact(j, paths.resampled_dir() / (id + ".json"));
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("resample", paths.sections_dir().string(), e.what());
  }
}

void stage_pack(const Config& config, const StagePaths& paths) {
  try {
    if (!std::filesystem::is_directory(paths.resampled_dir()))
      throw StageError("pack", paths.resampled_dir().string(),
                       "missing upstream artifact (run resample first)");

    // Wells keyed by id for tie curves.
    std::vector<well::ManifestWell> manifest_wells =
        well::load_well_manifest(config.well_manifest);
    auto find_well = [&](const std::string& id) -> const well::ManifestWell* {
      for (const auto& w : manifest_wells)
        if (w.well_id == id) return &w;
      return nullptr;
    };

    std::vector<std::filesystem::path> metas;
    for (const auto& entry :
         std::filesystem::directory_iterator(paths.resampled_dir()))
      if (entry.path().extension() == ".json") metas.push_back(entry.path());
    std::sort(metas.begin(), metas.end());
    if (metas.empty())
      throw StageError("pack", paths.resampled_dir().string(),
                       "no resampled sections found");

    const std::string config_hash = config.hash();
    std::vector<store::CuratedSection> sections;
    for (const auto& meta_path : metas) {
      const json meta = read_json_artifact(meta_path, "pack");
      const std::string id = meta.at("line_id").get<std::string>();
      const SeismicVolume tile = segy::read_volume(
          paths.resampled_dir() / (id + ".sgy"), config.header_offsets);
      if (tile.n_inline != store::kTileLateral ||
          tile.n_samples != store::kTileDepth || tile.n_crossline != 1)
        throw Error("resampled tile " + id + " is not 256x512");

      store::CuratedSection s;
      s.id = id;
      s.line_id = id;
      s.crs_tag = config.crs_tag;
      s.survey_id = config.survey_id;
      s.config_hash = config_hash;
      s.seismic.resize(tile.data.size());
      for (std::size_t i = 0; i < tile.data.size(); ++i)
        s.seismic[i] = static_cast<float>(tile.data[i]);

      for (const auto& t : meta.at("ticks")) {
        const std::string well_id = t.at("well_id").get<std::string>();
        const auto* entry = find_well(well_id);
        if (!entry) throw Error("tick well '" + well_id + "' missing from manifest");
        const well::WellDataset ds = well::load_well(*entry);

        store::WellTie tie;
        tie.well_id = well_id;
        tie.lateral_index = t.at("lateral_index").get<std::uint32_t>();
        for (const auto& curve : ds.curves) {
          if (curve.unmasked_count() < 2) continue;
          const auto rc = resample::resample_log(curve, 0.0, store::kTileSpacing,
                                                 store::kTileDepth, config.taper,
                                                 config.log_gap_threshold_m);
          store::CuratedCurve cc;
          cc.mnemonic = rc.mnemonic;
          cc.unit = rc.unit;
          cc.valid = rc.valid;
          cc.values.resize(rc.values.size());
          for (std::size_t i = 0; i < rc.values.size(); ++i)
            cc.values[i] = static_cast<float>(rc.values[i]);
          tie.curves.push_back(std::move(cc));
        }
        if (ds.checkshots) {
          // Velocity-from-checkshot control curve on the same grid.
          well::LogCurve vavg;
          vavg.mnemonic = "VAVG";
          vavg.unit = "M/S";
          for (const auto& s2 : well::average_velocity(*ds.checkshots)) {
            vavg.depth_m.push_back(s2.depth_m);
            vavg.values.push_back(s2.v_avg);
            vavg.valid.push_back(1);
          }
          if (vavg.values.size() >= 2) {
            const auto rc = resample::resample_log(
                vavg, 0.0, store::kTileSpacing, store::kTileDepth, config.taper,
                std::numeric_limits<double>::infinity());
            store::CuratedCurve cc;
            cc.mnemonic = rc.mnemonic;
            cc.unit = rc.unit;
            cc.valid = rc.valid;
            cc.values.resize(rc.values.size());
            for (std::size_t i = 0; i < rc.values.size(); ++i)
              cc.values[i] = static_cast<float>(rc.values[i]);
            tie.curves.push_back(std::move(cc));
          }
        }
        s.wells.push_back(std::move(tie));
      }
      sections.push_back(std::move(s));
    }

    store::DatasetManifest manifest;
    for (const auto& s : sections) manifest.section_ids.push_back(s.id);
    manifest.config_hash = config_hash;
    manifest.pipeline_version = kPipelineVersion;
    manifest.created = iso_timestamp_utc();
    store::write_hdf5(sections, manifest, paths.curated_h5());

    // QC report from the stage sidecars.
    store::QcArtifacts artifacts;
    const json fit_qc = read_json_artifact(paths.fit_qc_json(), "pack");
    artifacts.velocity_clamp_count = fit_qc.at("clamp_count").get<std::size_t>();
    artifacts.excluded_wells =
        fit_qc.at("excluded_wells").get<std::vector<std::string>>();
    for (const auto& r : fit_qc.at("rows"))
      artifacts.velocity_qc.rows.push_back(
          {r.at(0).get<std::string>(), r.at(1).get<double>(),
           r.at(2).get<double>(), r.at(3).get<double>(), r.at(4).get<double>(),
           r.at(5).get<double>()});
    for (const auto& w : fit_qc.at("wells"))
      artifacts.velocity_qc.wells.push_back(
          {w.at("well_id").get<std::string>(), w.at("inside").get<bool>(),
           w.at("sample_count").get<std::size_t>(),
           w.at("max_rel_err").get<double>(),
           w.at("mean_rel_err").get<double>()});
    const json convert_qc = read_json_artifact(paths.convert_qc_json(), "pack");
    artifacts.depth_clamp_count = convert_qc.at("clamp_count").get<std::size_t>();
    const json rect = read_json_artifact(paths.rect_json(), "pack");
    artifacts.duplicate_trace_count = rect.at("duplicate_count").get<std::size_t>();
    for (const auto& p : rect.at("hull"))
      artifacts.hull_polygon.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    artifacts.spacing_flags = rect.at("spacing_flags").get<std::vector<std::string>>();
    store::write_qc_report(artifacts, paths.qc_dir());
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("pack", paths.resampled_dir().string(), e.what());
  }
}

void run_pipeline(const Config& config, const StagePaths& paths,
                  std::size_t threads) {
  config.validate();
  std::filesystem::create_directories(paths.out);
  DirectoryLock lock(paths.lock_file());
  stage_scan(config, paths);
  stage_rect(config, paths);
  stage_fit(config, paths, threads);
  stage_convert(config, paths, threads);
  stage_extract(config, paths);
  stage_resample(config, paths);
  stage_pack(config, paths);
}

} // namespace seiscurate::pipeline
