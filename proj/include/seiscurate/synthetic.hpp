#ifndef SEISCURATE_SYNTHETIC_HPP
#define SEISCURATE_SYNTHETIC_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "seiscurate/segy.hpp"
#include "seiscurate/well.hpp"

namespace seiscurate::synthetic {

struct Layer {
  double bottom_depth_m = 0.0; // below datum; last layer bounds the logs
  double velocity = 0.0;       // interval velocity, m/s
  double gamma_api = 60.0;
  double density_gcc = 2.3;
  double neutron_frac = 0.25;
  double resistivity_ohmm = 5.0;
};

struct WellSpec {
  std::string id;
  double frac_inline = 0.5;    // fractional grid position in [0, 1]
  double frac_crossline = 0.5;
};

struct SurveySpec {
  std::string survey_id = "synthetic-3layer";
  int n_inline = 30;
  int n_crossline = 170;
  int inline_start = 100;
  int crossline_start = 300;
  double il_spacing_m = 25.0;
  double xl_spacing_m = 25.0;
  double origin_x = 465000.0;
  double origin_y = 6440000.0;
  double crossline_azimuth_deg = 90.0; // compass bearing of the crossline axis
  double dt_s = 0.004;
  double t_max_s = 2.4;
  double ricker_hz = 25.0;
  double checkshot_interval_m = 50.0;
  segy::SampleFormat format = segy::SampleFormat::ibm_float32;
  std::vector<Layer> layers;
  std::vector<WellSpec> wells;

  static SurveySpec demo(); // 3 flat layers, 3 wells
};

struct GeneratedSurvey {
  std::filesystem::path segy_path;
  std::filesystem::path manifest_path;
  std::filesystem::path config_path;
  std::vector<std::filesystem::path> las_paths;
  std::vector<std::filesystem::path> checkshot_paths;
};

// Layered time-domain SEG-Y (Ricker-convolved reflectivity), exact
// layer-cake checkshots, constant-per-layer LAS curves, well manifest
// and a ready-to-run pipeline config.
GeneratedSurvey make_synthetic_survey(const SurveySpec& spec,
                                      const std::filesystem::path& out_dir);

// Two-way time to a given depth through the layer stack.
double layer_twt_at_depth(const std::vector<Layer>& layers, double depth_m);

// Interface two-way times (one per internal interface).
std::vector<double> layer_interface_twt(const std::vector<Layer>& layers);

SurveySpec spec_from_json_file(const std::filesystem::path& path);

} // namespace seiscurate::synthetic

#endif
