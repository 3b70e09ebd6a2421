#ifndef SEISCURATE_DEPTH_CONVERT_HPP
#define SEISCURATE_DEPTH_CONVERT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "seiscurate/velocity.hpp"
#include "seiscurate/volume.hpp"

namespace seiscurate::depth {

// Time-depth mapping for one trace. t_k = k * dt with t_0 = 0;
// v_int[j] covers the interval (t_j, t_{j+1}]; z has one entry per time
// sample with z[0] = 0 and is strictly increasing.
struct TimeDepthCurve {
  double dt = 0.0;
  std::vector<double> v_int; // n_samples - 1 interval velocities, m/s
  std::vector<double> z;     // n_samples depths, meters

  void validate() const;
};

// Interval velocities from average velocities on the same time grid:
// v_int,k = (v_avg,k t_k - v_avg,k-1 t_k-1) / dt, first interval taken
// as v_avg at the first nonzero time, each clamped to [v_floor, v_ceil].
std::vector<double> interval_from_average(std::span<const double> v_avg,
                                          double dt, double v_floor,
                                          double v_ceil,
                                          std::size_t* clamp_count = nullptr);

// z_k = sum_{j<=k} (v_j / 2) dt; returns v_int.size() + 1 depths.
std::vector<double> depth_axis(std::span<const double> v_int, double dt);

TimeDepthCurve make_curve(std::span<const double> v_avg, double dt,
                          double v_floor, double v_ceil,
                          std::size_t* clamp_count = nullptr);

struct DepthTrace {
  std::vector<double> amplitudes;
  std::size_t valid_count = 0; // nodes beyond z(t_max) are zero fill
};

// Regular depth grid z_m = m * dz for m in [0, round(z_max / dz)):
// invert the monotone z(t) by binary search and interpolate the
// amplitude linearly in time.
DepthTrace convert_trace(std::span<const double> amplitudes,
                         const TimeDepthCurve& curve, double dz, double z_max);

struct ConvertOptions {
  double dz = 12.5;   // meters
  double z_max = 0.0; // 0 = deepest z(t_max), rounded up to a dz multiple
  double v_floor = 1400.0;
  double v_ceil = 7000.0;
  std::size_t threads = 1;
};

struct ConvertStats {
  std::size_t clamp_count = 0;
  double z_max = 0.0;
};

// Per-trace interval_from_average -> depth_axis -> convert_trace over
// matching time and velocity grids; output independent of thread count.
SeismicVolume convert_volume(const SeismicVolume& seismic,
                             const vel::VelocityVolume& velocity,
                             const ConvertOptions& options = {},
                             ConvertStats* stats = nullptr);

} // namespace seiscurate::depth

#endif
