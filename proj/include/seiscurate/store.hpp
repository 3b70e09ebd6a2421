#ifndef SEISCURATE_STORE_HPP
#define SEISCURATE_STORE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seiscurate/errors.hpp"
#include "seiscurate/velocity.hpp"
#include "seiscurate/volume.hpp"

namespace seiscurate::store {

// Fixed training-tile contract: 256 lateral x 512 depth at 12.5 m.
inline constexpr std::size_t kTileLateral = 256;
inline constexpr std::size_t kTileDepth = 512;
inline constexpr double kTileSpacing = 12.5; // meters, both axes

struct CuratedCurve {
  std::string mnemonic;
  std::string unit;
  std::vector<float> values;       // kTileDepth samples
  std::vector<std::uint8_t> valid; // kTileDepth
};

struct WellTie {
  std::string well_id;
  std::uint32_t lateral_index = 0; // in [0, kTileLateral)
  std::vector<CuratedCurve> curves;
};

struct CuratedSection {
  std::string id;
  std::string line_id;
  std::vector<float> seismic; // [kTileLateral][kTileDepth], row-major
  std::string crs_tag;
  std::string survey_id;
  std::string config_hash;
  std::vector<WellTie> wells;

  void validate() const;
};

struct DatasetManifest {
  std::vector<std::string> section_ids;
  std::string config_hash;
  std::string pipeline_version;
  std::string created; // excluded from content hashing

  void validate() const;
};

inline constexpr const char* kStoreVersion = "openseisml-curated/1";

// Layout: /sections/<id>/{seismic, wells/<well>/<mnemonic>[, _mask]},
// manifest JSON string and version as root attributes.
void write_hdf5(const std::vector<CuratedSection>& sections,
                const DatasetManifest& manifest,
                const std::filesystem::path& path);

struct CuratedDataset {
  std::vector<CuratedSection> sections;
  DatasetManifest manifest;
};

// Bit-exact array recovery; version and manifest-vs-contents validated.
CuratedDataset read_hdf5(const std::filesystem::path& path);

// FNV-1a over all logical content except the creation timestamp.
std::uint64_t content_hash(const CuratedDataset& dataset);

struct QcArtifacts {
  vel::QcTable velocity_qc;
  std::size_t velocity_clamp_count = 0;
  std::size_t depth_clamp_count = 0;
  std::size_t duplicate_trace_count = 0;
  std::vector<Point> hull_polygon;
  std::vector<std::string> spacing_flags;
  std::vector<std::string> excluded_wells;
};

// qc_velocity.csv (well_id,depth_m,twt_s,v_checkshot,v_interp,rel_err)
// plus qc_summary.json in `dir`.
void write_qc_report(const QcArtifacts& artifacts,
                     const std::filesystem::path& dir);

} // namespace seiscurate::store

#endif
