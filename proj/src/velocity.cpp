#include "seiscurate/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <json.hpp>

#include "seiscurate/geometry.hpp"
#include "seiscurate/parallel.hpp"

namespace seiscurate::vel {

namespace {

constexpr std::size_t kMaxCenters = 5000;
constexpr double kResidualTolerance = 1e-10;

double distance(const Position& a, const Position& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dt = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dt * dt);
}

// Positions closer than this (normalized units) count as the same
// checkshot location and are averaged before the fit.
constexpr double kDuplicateEps = 1e-9;

} // namespace

RbfKernel kernel_from_name(const std::string& name) {
  if (name == "thin_plate") return RbfKernel::thin_plate;
  if (name == "multiquadric") return RbfKernel::multiquadric;
  if (name == "gaussian") return RbfKernel::gaussian;
  throw ValidationError("unknown RBF kernel '" + name + "'");
}

std::string kernel_name(RbfKernel kernel) {
  switch (kernel) {
    case RbfKernel::thin_plate: return "thin_plate";
    case RbfKernel::multiquadric: return "multiquadric";
    case RbfKernel::gaussian: return "gaussian";
  }
  return "unknown";
}

double kernel_value(RbfKernel kernel, double epsilon, double r) {
  switch (kernel) {
    case RbfKernel::thin_plate:
      return r > 0.0 ? r * r * std::log(r) : 0.0;
    case RbfKernel::multiquadric:
      return std::sqrt(r * r + epsilon * epsilon);
    case RbfKernel::gaussian: {
      const double er = epsilon * r;
      return std::exp(-er * er);
    }
  }
  return 0.0;
}

Position CoordScaler::normalize(const Position& raw) const {
  Position out;
  for (int a = 0; a < 3; ++a) out[a] = (raw[a] - min[a]) / (max[a] - min[a]);
  return out;
}

void CoordScaler::validate() const {
  for (int a = 0; a < 3; ++a)
    if (!(max[a] > min[a]))
      throw ValidationError("coordinate scaler axis " + std::to_string(a) +
                            " range is degenerate");
}

void VelocitySample::validate() const {
  if (!(v > 0.0)) throw ValidationError("velocity sample must be > 0 m/s");
  if (position[2] < -1e-12)
    throw ValidationError("velocity sample time must be >= 0");
  for (double c : position)
    if (!std::isfinite(c)) throw ValidationError("velocity sample position not finite");
}

double RbfInterpolant::evaluate(const Position& p) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    sum += weights[i] * kernel_value(kernel, epsilon, distance(p, centers[i]));
  return sum;
}

double RbfInterpolant::nearest_center_value(const Position& p,
                                            double* out_distance) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d = distance(p, centers[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (out_distance) *out_distance = best_d;
  return center_values[best];
}

nlohmann::json RbfInterpolant::to_json() const {
  nlohmann::json j;
  j["kernel"] = kernel_name(kernel);
  j["epsilon"] = epsilon;
  j["smoothing"] = smoothing;
  j["centers"] = centers;
  j["weights"] = weights;
  j["center_values"] = center_values;
  j["scaler"] = {{"min", scaler.min}, {"max", scaler.max}};
  return j;
}

RbfInterpolant RbfInterpolant::from_json(const nlohmann::json& j) {
  RbfInterpolant m;
  m.kernel = kernel_from_name(j.at("kernel").get<std::string>());
  m.epsilon = j.at("epsilon").get<double>();
  m.smoothing = j.at("smoothing").get<double>();
  m.centers = j.at("centers").get<std::vector<Position>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.center_values = j.at("center_values").get<std::vector<double>>();
  m.scaler.min = j.at("scaler").at("min").get<std::array<double, 3>>();
  m.scaler.max = j.at("scaler").at("max").get<std::array<double, 3>>();
  if (m.centers.size() != m.weights.size() ||
      m.centers.size() != m.center_values.size())
    throw ValidationError("RBF model arrays have mismatched lengths");
  return m;
}

RbfInterpolant fit_rbf(std::vector<VelocitySample> samples, RbfKernel kernel,
                       double smoothing, double epsilon, CoordScaler scaler) {
  if (samples.empty()) throw ValidationError("RBF fit needs at least one sample");
  if (smoothing < 0.0) throw ValidationError("smoothing must be >= 0");
  for (const auto& s : samples) s.validate();

  // Average duplicate positions.
  std::vector<Position> centers;
  std::vector<double> values;
  std::vector<std::size_t> counts;
  for (const auto& s : samples) {
    bool merged = false;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (distance(centers[i], s.position) < kDuplicateEps) {
        values[i] += s.v;
        counts[i] += 1;
        merged = true;
        break;
      }
    }
    if (!merged) {
      centers.push_back(s.position);
      values.push_back(s.v);
      counts.push_back(1);
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] /= static_cast<double>(counts[i]);

  const std::size_t n = centers.size();
  if (n > kMaxCenters)
    throw ValidationError(
        "RBF system has " + std::to_string(n) + " centers; the dense direct "
        "solve is limited to " + std::to_string(kMaxCenters) +
        " — thin the checkshot sampling or split the survey");

  Eigen::MatrixXd phi(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    phi(i, i) = kernel_value(kernel, epsilon, 0.0) + smoothing;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_value(kernel, epsilon, distance(centers[i], centers[j]));
      phi(i, j) = v;
      phi(j, i) = v;
    }
  }
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = values[i];

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(phi);
  Eigen::VectorXd w = lu.solve(rhs);
  const double rhs_norm = std::max(rhs.norm(), 1e-300);
  double residual = (phi * w - rhs).norm() / rhs_norm;
  // Iterative refinement recovers the small-residual contract on
  // ill-conditioned thin-plate systems.
  for (int pass = 0; pass < 3 && residual > 1e-12; ++pass) {
    w += lu.solve(rhs - phi * w);
    residual = (phi * w - rhs).norm() / rhs_norm;
  }
  if (!w.allFinite() || residual > kResidualTolerance) {
    const double rcond = lu.rcond();
    throw ValidationError(
        "RBF system is singular or too ill-conditioned (relative residual " +
        std::to_string(residual) + ", reciprocal condition estimate " +
        std::to_string(rcond) +
        "); increase the smoothing parameter mu above 0");
  }

  RbfInterpolant model;
  model.kernel = kernel;
  model.epsilon = epsilon;
  model.smoothing = smoothing;
  model.centers = std::move(centers);
  model.weights.assign(w.data(), w.data() + n);
  model.center_values = std::move(values);
  model.scaler = scaler;
  return model;
}

std::vector<double> evaluate_rbf(const RbfInterpolant& model,
                                 std::span<const Position> positions) {
  std::vector<double> out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (double c : positions[i])
      if (!std::isfinite(c))
        throw ValidationError("evaluation position is not finite");
    out[i] = model.evaluate(positions[i]);
  }
  return out;
}

namespace {

double evaluate_clamped(const RbfInterpolant& model, const Position& p,
                        const VolumeBuildOptions& options, bool* clamped) {
  double v;
  if (options.constant_extension) {
    double d = 0.0;
    const double nearest = model.nearest_center_value(p, &d);
    v = d > options.extension_radius ? nearest : model.evaluate(p);
  } else {
    v = model.evaluate(p);
  }
  const double c = std::clamp(v, options.v_floor, options.v_ceil);
  if (clamped) *clamped = c != v;
  return c;
}

} // namespace

VelocityVolume build_velocity_volume(const RbfInterpolant& model,
                                     const SeismicVolume& grid,
                                     const VolumeBuildOptions& options) {
  VelocityVolume out;
  out.volume.n_inline = grid.n_inline;
  out.volume.n_crossline = grid.n_crossline;
  out.volume.n_samples = grid.n_samples;
  out.volume.axis = Axis::time;
  out.volume.sample_interval = grid.sample_interval;
  out.volume.geometry = grid.geometry;
  out.volume.crs_tag = grid.crs_tag;
  const std::size_t n_nodes = grid.n_inline * grid.n_crossline * grid.n_samples;
  out.volume.data.resize(n_nodes);
  if (n_nodes == 0) return out;

  std::vector<std::size_t> clamp_per_trace(grid.trace_count(), 0);
  parallel_for(grid.trace_count(), options.threads, [&](std::size_t trace) {
    const std::size_t i = trace / grid.n_crossline;
    const std::size_t j = trace % grid.n_crossline;
    double x, y;
    grid.geometry.xy_at(static_cast<double>(i), static_cast<double>(j), x, y);
    double* dst = out.volume.data.data() + trace * grid.n_samples;
    std::size_t clamps = 0;
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
      const Position p = model.scaler.normalize(
          {x, y, static_cast<double>(k) * grid.sample_interval});
      bool clamped = false;
      dst[k] = evaluate_clamped(model, p, options, &clamped);
      if (clamped) ++clamps;
    }
    clamp_per_trace[trace] = clamps;
  });
  for (std::size_t c : clamp_per_trace) out.clamp_count += c;
  return out;
}

QcTable qc_compare_at_wells(const RbfInterpolant& model,
                            std::span<const QcWellInput> wells,
                            const GridGeometry& geometry, std::size_t n_il,
                            std::size_t n_xl,
                            const VolumeBuildOptions& options) {
  QcTable table;
  for (const auto& input : wells) {
    QcWellSummary summary;
    summary.well_id = input.well_id;
    const auto loc = geom::locate_well(input.x, input.y, geometry, n_il, n_xl);
    summary.inside = loc.inside;
    if (!loc.inside) {
      table.wells.push_back(summary);
      continue;
    }
    double max_err = 0.0, sum_err = 0.0;
    std::size_t count = 0;
    for (const auto& sample : well::average_velocity(input.checkshots)) {
      const Position p =
          model.scaler.normalize({input.x, input.y, sample.twt_s});
      const double v_interp = evaluate_clamped(model, p, options, nullptr);
      const double rel = std::abs(v_interp - sample.v_avg) / sample.v_avg;
      table.rows.push_back({input.well_id, sample.depth_m, sample.twt_s,
                            sample.v_avg, v_interp, rel});
      max_err = std::max(max_err, rel);
      sum_err += rel;
      ++count;
    }
    summary.sample_count = count;
    summary.max_rel_err = max_err;
    summary.mean_rel_err = count ? sum_err / static_cast<double>(count) : 0.0;
    table.wells.push_back(summary);
  }
  return table;
}

} // namespace seiscurate::vel
