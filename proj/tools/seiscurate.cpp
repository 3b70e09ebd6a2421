#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seiscurate/pipeline.hpp"
#include "seiscurate/synthetic.hpp"

namespace {

using seiscurate::pipeline::Config;
using seiscurate::pipeline::StagePaths;

struct CommonOpts {
  std::string config_path;
  std::string out_override;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "pipeline config JSON")
      ->required();
  cmd->add_option("--out", opts.out_override,
                  "override the config's output directory");
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = hardware count)");
}

StagePaths make_paths(const Config& config, const CommonOpts& opts) {
  StagePaths paths;
  paths.out = opts.out_override.empty()
                  ? config.output_dir
                  : std::filesystem::path(opts.out_override);
  return paths;
}

void emit_error_json(const std::exception& e) {
  nlohmann::json j;
  if (const auto* se = dynamic_cast<const seiscurate::StageError*>(&e)) {
    j["error"] = {{"stage", se->stage()},
                  {"file", se->file()},
                  {"message", se->cause()}};
  } else {
    j["error"] = {{"stage", "cli"}, {"file", ""}, {"message", e.what()}};
  }
  std::cerr << j.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"seiscurate: seismic and well-log training-data curation"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string synth_spec;
  std::string synth_out;

  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic survey fixture (SEG-Y + LAS + checkshots)");
  synth->add_option("--spec", synth_spec,
                    "survey spec JSON (omit for the built-in demo survey)");
  synth->add_option("--out", synth_out, "output directory")->required();

  auto* run = app.add_subcommand("run", "run the full pipeline");
  add_common(run, opts);
  auto* scan = app.add_subcommand("scan", "scan SEG-Y trace geometry");
  add_common(scan, opts);
  auto* rect = app.add_subcommand("rect", "survey footprint and largest rectangle");
  add_common(rect, opts);
  auto* fit = app.add_subcommand("fit", "fit the checkshot velocity model");
  add_common(fit, opts);
  auto* convert = app.add_subcommand("convert", "time-to-depth conversion");
  add_common(convert, opts);
  auto* extract = app.add_subcommand("extract", "extract quasi-2D well sections");
  add_common(extract, opts);
  auto* resample = app.add_subcommand("resample", "resample sections to 256x512");
  add_common(resample, opts);
  auto* pack = app.add_subcommand("pack", "pack curated sections into HDF5");
  add_common(pack, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const auto spec = synth_spec.empty()
                            ? seiscurate::synthetic::SurveySpec::demo()
                            : seiscurate::synthetic::spec_from_json_file(synth_spec);
      const auto result = seiscurate::synthetic::make_synthetic_survey(spec, synth_out);
      std::cout << "wrote " << result.segy_path.string() << "\n"
                << "wrote " << result.manifest_path.string() << "\n"
                << "wrote " << result.config_path.string() << "\n";
      return 0;
    }

    const Config config = seiscurate::pipeline::load_config(opts.config_path);
    const StagePaths paths = make_paths(config, opts);

    if (run->parsed()) {
      seiscurate::pipeline::run_pipeline(config, paths, opts.threads);
      std::cout << "curated dataset: " << paths.curated_h5().string() << "\n";
      return 0;
    }

    std::filesystem::create_directories(paths.out);
    seiscurate::pipeline::DirectoryLock lock(paths.lock_file());
    if (scan->parsed()) {
      seiscurate::pipeline::stage_scan(config, paths);
      std::cout << "wrote " << paths.scan_json().string() << "\n";
    } else if (rect->parsed()) {
      seiscurate::pipeline::stage_rect(config, paths);
      std::cout << "wrote " << paths.rect_json().string() << "\n";
    } else if (fit->parsed()) {
      seiscurate::pipeline::stage_fit(config, paths, opts.threads);
      std::cout << "wrote " << paths.model_json().string() << "\n";
    } else if (convert->parsed()) {
      seiscurate::pipeline::stage_convert(config, paths, opts.threads);
      std::cout << "wrote " << paths.depth_segy().string() << "\n";
    } else if (extract->parsed()) {
      seiscurate::pipeline::stage_extract(config, paths);
      std::cout << "wrote " << paths.sections_dir().string() << "\n";
    } else if (resample->parsed()) {
      seiscurate::pipeline::stage_resample(config, paths);
      std::cout << "wrote " << paths.resampled_dir().string() << "\n";
    } else if (pack->parsed()) {
      seiscurate::pipeline::stage_pack(config, paths);
      std::cout << "wrote " << paths.curated_h5().string() << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    emit_error_json(e);
    return 1;
  }
}
