#ifndef SEISCURATE_VOLUME_HPP
#define SEISCURATE_VOLUME_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seiscurate/errors.hpp"

namespace seiscurate {

enum class Axis { time, depth };

// Affine map between (inline, crossline) grid indices and projected
// survey coordinates in meters. Indices are relative to the grid corner
// (inline_min, crossline_min).
struct GridGeometry {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double il_dx = 0.0; // meters east per inline index step
  double il_dy = 0.0; // meters north per inline index step
  double xl_dx = 0.0;
  double xl_dy = 0.0;
  int inline_min = 0;
  int crossline_min = 0;

  double det() const { return il_dx * xl_dy - il_dy * xl_dx; }

  void xy_at(double frac_il, double frac_xl, double& x, double& y) const {
    x = origin_x + frac_il * il_dx + frac_xl * xl_dx;
    y = origin_y + frac_il * il_dy + frac_xl * xl_dy;
  }

  // Inverse map, meters -> fractional indices. Throws on a singular basis.
  void locate(double x, double y, double& frac_il, double& frac_xl) const {
    const double d = det();
    if (std::abs(d) < 1e-12)
      throw ValidationError("grid geometry basis is singular");
    const double rx = x - origin_x;
    const double ry = y - origin_y;
    frac_il = (rx * xl_dy - ry * xl_dx) / d;
    frac_xl = (ry * il_dx - rx * il_dy) / d;
  }
};

// Regular 3D grid of amplitudes on (inline, crossline, time|depth).
// Data layout is [inline][crossline][sample], row-major.
struct SeismicVolume {
  std::size_t n_inline = 0;
  std::size_t n_crossline = 0;
  std::size_t n_samples = 0;
  Axis axis = Axis::time;
  double sample_interval = 0.0; // seconds TWT (time) or meters (depth)
  GridGeometry geometry;
  std::string crs_tag;
  std::vector<double> data;
  // Depth volumes: per-trace count of samples covered by the time-depth
  // mapping; samples at and beyond the count are zero fill. Empty means
  // all samples valid.
  std::vector<std::uint32_t> valid_samples;

  std::size_t trace_count() const { return n_inline * n_crossline; }

  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data[(i * n_crossline + j) * n_samples + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data[(i * n_crossline + j) * n_samples + k];
  }

  std::span<double> trace(std::size_t i, std::size_t j) {
    return {data.data() + (i * n_crossline + j) * n_samples, n_samples};
  }
  std::span<const double> trace(std::size_t i, std::size_t j) const {
    return {data.data() + (i * n_crossline + j) * n_samples, n_samples};
  }

  void validate() const {
    if (n_inline < 1 || n_crossline < 1 || n_samples < 1)
      throw ValidationError("volume dimensions must all be >= 1");
    if (!(sample_interval > 0.0))
      throw ValidationError("volume sample interval must be > 0");
    if (std::abs(geometry.det()) < 1e-12)
      throw ValidationError("volume geometry basis vectors are linearly dependent");
    if (data.size() != n_inline * n_crossline * n_samples)
      throw ValidationError("volume data size does not match dimensions");
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

} // namespace seiscurate

#endif
