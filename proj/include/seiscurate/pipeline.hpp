#ifndef SEISCURATE_PIPELINE_HPP
#define SEISCURATE_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seiscurate/geometry.hpp"
#include "seiscurate/resample.hpp"
#include "seiscurate/segy.hpp"
#include "seiscurate/store.hpp"
#include "seiscurate/velocity.hpp"

namespace seiscurate::pipeline {

inline constexpr const char* kPipelineVersion = "0.1.0";

struct Config {
  std::string survey_id;
  std::filesystem::path segy_path;
  std::filesystem::path well_manifest;
  // Paths exactly as written in the config file; the hash uses these so
  // it does not depend on where the bundle sits on disk.
  std::string segy_path_as_written;
  std::string well_manifest_as_written;
  std::string crs_tag;
  // Optional affine bringing well coordinates into the seismic CRS.
  geom::Affine2D well_crs_transform;
  bool has_well_crs_transform = false;
  segy::HeaderOffsets header_offsets;
  int hull_k = 8;

  vel::RbfKernel kernel = vel::RbfKernel::thin_plate;
  double rbf_epsilon = 1.0;
  double rbf_smoothing = 0.0;
  bool constant_extension = false;
  double extension_radius = 0.0;

  double v_floor = 1400.0;
  double v_ceil = 7000.0;

  double dz = 12.5;    // depth conversion grid, meters
  double z_max = 0.0;  // 0 = automatic

  double lateral_step = 12.5;
  // Explicit well-id sequences; empty = one automatic line through all
  // in-rectangle wells (greedy nearest-neighbor order).
  std::vector<std::vector<std::string>> lines;

  resample::TaperSpec taper;
  double log_gap_threshold_m = 50.0;

  std::filesystem::path output_dir;

  void validate() const;
  std::string hash() const; // 16 hex digits over the canonical form
};

Config load_config(const std::filesystem::path& path);

// On-disk layout of stage artifacts inside the output directory.
struct StagePaths {
  std::filesystem::path out;

  std::filesystem::path scan_json() const { return out / "scan.json"; }
  std::filesystem::path occupancy_pgm() const { return out / "occupancy.pgm"; }
  std::filesystem::path rect_json() const { return out / "rect.json"; }
  std::filesystem::path model_json() const { return out / "model.json"; }
  std::filesystem::path vel_segy() const { return out / "vel.sgy"; }
  std::filesystem::path fit_qc_json() const { return out / "fit_qc.json"; }
  std::filesystem::path depth_segy() const { return out / "depth.sgy"; }
  std::filesystem::path convert_qc_json() const { return out / "convert_qc.json"; }
  std::filesystem::path sections_dir() const { return out / "sections"; }
  std::filesystem::path resampled_dir() const { return out / "resampled"; }
  std::filesystem::path curated_h5() const { return out / "curated.h5"; }
  std::filesystem::path qc_dir() const { return out / "qc"; }
  std::filesystem::path lock_file() const { return out / ".seiscurate.lock"; }
};

// One pipeline process per output directory.
class DirectoryLock {
public:
  explicit DirectoryLock(const std::filesystem::path& lock_path);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
  std::filesystem::path path_;
};

void stage_scan(const Config& config, const StagePaths& paths);
void stage_rect(const Config& config, const StagePaths& paths);
void stage_fit(const Config& config, const StagePaths& paths, std::size_t threads);
void stage_convert(const Config& config, const StagePaths& paths, std::size_t threads);
void stage_extract(const Config& config, const StagePaths& paths);
void stage_resample(const Config& config, const StagePaths& paths);
void stage_pack(const Config& config, const StagePaths& paths);

// scan -> rect -> fit -> convert -> extract -> resample -> pack.
// Rerunning with identical config and inputs reproduces every artifact.
void run_pipeline(const Config& config, const StagePaths& paths,
                  std::size_t threads = 0);

} // namespace seiscurate::pipeline

#endif
