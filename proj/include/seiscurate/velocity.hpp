#ifndef SEISCURATE_VELOCITY_HPP
#define SEISCURATE_VELOCITY_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seiscurate/volume.hpp"
#include "seiscurate/well.hpp"

namespace seiscurate::vel {

enum class RbfKernel { thin_plate, multiquadric, gaussian };

RbfKernel kernel_from_name(const std::string& name);
std::string kernel_name(RbfKernel kernel);

// phi(r); thin-plate r^2 log r with phi(0) = 0.
double kernel_value(RbfKernel kernel, double epsilon, double r);

using Position = std::array<double, 3>; // (x, y, t), normalized

// Per-axis min/max used to map survey coordinates (meters, meters,
// seconds) onto [0,1]^3 before any distance computation. Horizontal
// extents and time are incommensurable otherwise.
struct CoordScaler {
  std::array<double, 3> min{0.0, 0.0, 0.0};
  std::array<double, 3> max{1.0, 1.0, 1.0};

  Position normalize(const Position& raw) const;
  void validate() const;
};

struct VelocitySample {
  Position position; // normalized coordinates
  double v = 0.0;    // m/s

  void validate() const;
};

// Eq-style interpolant: f(x) = sum_i weight_i * phi(|x - center_i|).
struct RbfInterpolant {
  RbfKernel kernel = RbfKernel::thin_plate;
  double epsilon = 1.0;
  double smoothing = 0.0;
  std::vector<Position> centers;
  std::vector<double> weights;
  std::vector<double> center_values; // deduplicated data values, for
                                     // constant extension
  CoordScaler scaler;

  double evaluate(const Position& p) const;
  // Nearest-center data value; used beyond the extension radius.
  double nearest_center_value(const Position& p, double* distance = nullptr) const;

  nlohmann::json to_json() const;
  static RbfInterpolant from_json(const nlohmann::json& j);
};

// Solves (Phi + mu I) w = v with LU and iterative refinement; duplicate
// positions are averaged first. Throws on a singular system at mu = 0
// with a condition estimate and a suggestion to raise mu.
RbfInterpolant fit_rbf(std::vector<VelocitySample> samples, RbfKernel kernel,
                       double smoothing, double epsilon = 1.0,
                       CoordScaler scaler = {});

std::vector<double> evaluate_rbf(const RbfInterpolant& model,
                                 std::span<const Position> positions);

struct VolumeBuildOptions {
  double v_floor = 1400.0; // m/s
  double v_ceil = 7000.0;
  bool constant_extension = false;
  double extension_radius = 0.0; // normalized units
  std::size_t threads = 1;
};

struct VelocityVolume {
  SeismicVolume volume; // values are v_avg in m/s on the time grid
  std::size_t clamp_count = 0;
};

// Evaluates the model at every (inline, crossline, t_k) node of the
// template grid, then clamps to [v_floor, v_ceil].
VelocityVolume build_velocity_volume(const RbfInterpolant& model,
                                     const SeismicVolume& grid,
                                     const VolumeBuildOptions& options = {});

struct QcRow {
  std::string well_id;
  double depth_m = 0.0;
  double twt_s = 0.0;
  double v_checkshot = 0.0;
  double v_interp = 0.0;
  double rel_err = 0.0;
};

struct QcWellSummary {
  std::string well_id;
  bool inside = true;
  std::size_t sample_count = 0;
  double max_rel_err = 0.0;
  double mean_rel_err = 0.0;
};

struct QcTable {
  std::vector<QcRow> rows;
  std::vector<QcWellSummary> wells; // outside wells flagged, rows excluded
};

struct QcWellInput {
  std::string well_id;
  double x = 0.0;
  double y = 0.0;
  well::CheckshotSeries checkshots;
};

// Compares checkshot-derived average velocities against the interpolated
// field at the same (x, y, t) positions.
QcTable qc_compare_at_wells(const RbfInterpolant& model,
                            std::span<const QcWellInput> wells,
                            const GridGeometry& geometry, std::size_t n_il,
                            std::size_t n_xl,
                            const VolumeBuildOptions& options = {});

} // namespace seiscurate::vel

#endif
