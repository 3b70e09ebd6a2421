#ifndef SEISCURATE_WELL_HPP
#define SEISCURATE_WELL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seiscurate/errors.hpp"

namespace seiscurate::well {

struct LogCurve {
  std::string mnemonic;
  std::string unit;
  std::string description;
  std::vector<double> depth_m; // measured depth, strictly increasing
  std::vector<double> values;
  std::vector<std::uint8_t> valid; // 0 where the NULL sentinel was read

  std::size_t unmasked_count() const;
};

// Depth below datum vs two-way time, both strictly increasing.
struct CheckshotSeries {
  std::vector<double> depth_m;
  std::vector<double> twt_s;

  void validate() const;
};

struct WellDataset {
  std::string well_id;
  double surface_x = 0.0;
  double surface_y = 0.0;
  bool has_surface_xy = false;
  double kb_elevation = 0.0;
  double null_value = -999.25;
  bool wrap = false;
  std::vector<LogCurve> curves;
  std::optional<CheckshotSeries> checkshots;

  const LogCurve* find_curve(const std::string& mnemonic) const;
};

// LAS 2.0 reader: ~V, ~W, ~C, ~A sections, wrapped or unwrapped data.
WellDataset parse_las(const std::filesystem::path& path);

// LAS 2.0 writer, full double precision so reparse reproduces the
// curves exactly.
void write_las(const WellDataset& well, const std::filesystem::path& path,
               bool wrap = false);

struct CheckshotUnits {
  enum class TimeUnit { seconds, milliseconds };
  enum class TimeKind { two_way, one_way };
  TimeUnit unit = TimeUnit::milliseconds;
  TimeKind kind = TimeKind::two_way;
};

// CSV with a header row naming `depth` and `time` columns; normalized
// to meters / seconds two-way and sorted by depth.
CheckshotSeries parse_checkshot(const std::filesystem::path& path,
                                CheckshotUnits units);

void write_checkshot_csv(const CheckshotSeries& series,
                         const std::filesystem::path& path,
                         CheckshotUnits units);

struct AverageVelocitySample {
  double depth_m = 0.0;
  double twt_s = 0.0;
  double v_avg = 0.0; // 2 * depth / twt, m/s
};

// Skips the surface point (twt == 0); zero time at nonzero depth is an
// error.
std::vector<AverageVelocitySample> average_velocity(const CheckshotSeries& cs);

// Ingestion manifest: per-well file paths, survey position, datum shift.
struct ManifestWell {
  std::string well_id;
  double surface_x = 0.0;
  double surface_y = 0.0;
  bool has_surface_xy = false;
  double datum_shift_m = 0.0;
  std::filesystem::path las_path;
  std::filesystem::path checkshot_path; // may be empty
  CheckshotUnits checkshot_units;
};

std::vector<ManifestWell> load_well_manifest(const std::filesystem::path& path);

// Full ingestion of one manifest entry: LAS + checkshots, datum shift
// applied to both, surface coordinates resolved (manifest overrides ~W).
WellDataset load_well(const ManifestWell& entry);

} // namespace seiscurate::well

#endif
