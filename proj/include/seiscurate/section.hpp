#ifndef SEISCURATE_SECTION_HPP
#define SEISCURATE_SECTION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seiscurate/volume.hpp"

namespace seiscurate::section {

// Polyline through well positions, parameterized by cumulative
// arclength in meters.
struct QuasiLine {
  std::vector<std::string> well_ids;
  std::vector<Point> vertices;
  std::vector<double> arclength; // per vertex, starts at 0

  double total_length() const { return arclength.empty() ? 0.0 : arclength.back(); }
  Point point_at(double s) const;
  void validate() const;
};

struct OrderResult {
  std::vector<std::size_t> order;      // indices into the input, chain order
  std::vector<std::size_t> coincident; // dropped duplicates (input indices)
};

// Greedy nearest-neighbor chain from the west-most well (ties: south-most).
// Coincident wells are deduplicated with a warning entry.
OrderResult order_wells(std::span<const Point> wells);

QuasiLine make_line(std::span<const Point> wells,
                    std::span<const std::string> ids);

struct WellTick {
  std::string well_id;
  std::size_t lateral_index = 0;
};

struct Section {
  std::size_t n_lateral = 0;
  std::size_t n_depth = 0;
  double lateral_step = 0.0; // meters
  double dz = 0.0;           // meters
  std::vector<double> amplitudes; // [lateral][depth]
  std::vector<WellTick> well_ticks;
  std::vector<Point> sample_xy; // survey position of each lateral sample
  std::size_t clipped_samples = 0; // samples outside the volume footprint

  double& at(std::size_t l, std::size_t d) { return amplitudes[l * n_depth + d]; }
  double at(std::size_t l, std::size_t d) const { return amplitudes[l * n_depth + d]; }
};

struct ExtractOptions {
  double lateral_step = 12.5; // meters
  // 0 = sample the whole line, closed at both ends (final step may be
  // partial). > 0 = fixed window anchored at the line start, half-open
  // with exactly round(window/step) samples; zero fill past the line.
  double window_length = 0.0;
  // 0 = use the volume's depth sample count; otherwise pad or crop the
  // depth axis to this many samples.
  std::size_t n_depth = 0;
};

// Vertical section along the polyline; amplitude by bilinear
// interpolation of the 4 surrounding traces per depth sample.
Section extract_section(const SeismicVolume& volume, const QuasiLine& line,
                        const ExtractOptions& options);

} // namespace seiscurate::section

#endif
