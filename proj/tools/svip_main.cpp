// svip: batch pipeline turning 360-degree street survey frames plus GPS
// metadata into geocoded pedestrian detections, per-region mobility
// observations and regression reports.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "svip/config.hpp"
#include "svip/error.hpp"
#include "svip/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CliOptions {
  std::string config_path;
  int jobs = 0;        // 0 = use config value
  std::string out;     // empty = use config value
  bool print_config = false;
  std::vector<std::string> observations;
  std::string reference;
};

svip::PipelineConfig effective_config(const CliOptions& opts,
                                      bool config_required) {
  svip::PipelineConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = svip::load_config(opts.config_path);
  } else if (config_required) {
    throw svip::ConfigError("--config is required for this subcommand");
  }
  if (opts.jobs > 0) cfg.jobs = opts.jobs;
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  if (!opts.reference.empty()) cfg.reference_series_file = opts.reference;
  return cfg;
}

std::vector<fs::path> observation_paths(const CliOptions& opts,
                                        const svip::PipelineConfig& cfg) {
  std::vector<fs::path> paths;
  for (const std::string& o : opts.observations) paths.emplace_back(o);
  if (paths.empty()) {
    paths.push_back(cfg.output_dir / svip::artifact::kObservationsCsv);
  }
  return paths;
}

void print_manifest_counts(const svip::RunManifest& m) {
  std::cerr << "frames: " << m.frames_kept << "/" << m.frames_in
            << " kept (" << m.frames_outside_track << " outside track), views: "
            << m.views_produced << "\n";
  std::cerr << "detections: " << m.detections_raw << " raw, "
            << m.detections_kept << " kept, " << m.detections_matched
            << " matched, " << m.detections_unmatched << " unmatched\n";
  std::cerr << "observations: " << m.observations << " over "
            << m.regions_loaded << " regions\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"street-view imagery mobility pipeline"};
  app.require_subcommand(0, 1);

  CliOptions opts;
  app.add_option("--config", opts.config_path, "pipeline configuration file");
  app.add_option("--jobs", opts.jobs, "worker threads (overrides config)");
  app.add_option("--out", opts.out, "output directory (overrides config)");
  app.add_flag("--print-config", opts.print_config,
               "print the effective configuration and exit");

  auto* run = app.add_subcommand("run", "full chain: subsample through aggregate");
  auto* subsample = app.add_subcommand("subsample", "select frames at ~4 m spacing");
  auto* orthorectify =
      app.add_subcommand("orthorectify", "project frames to side-facing views");
  auto* detect = app.add_subcommand(
      "detect", "run the stub detector, an external command, or ingest a file");
  auto* filter = app.add_subcommand("filter", "apply the confidence threshold");
  auto* geocode = app.add_subcommand("geocode", "match detections to region GEOIDs");
  auto* aggregate =
      app.add_subcommand("aggregate", "reduce to per-region observations");
  auto* analyze =
      app.add_subcommand("analyze", "fit the regression models and export series");
  auto* export_figures =
      app.add_subcommand("export-figures", "write long-format figure data");

  for (CLI::App* sub : {analyze, export_figures}) {
    sub->add_option("--observations", opts.observations,
                    "observation CSV files (default: <out>/observations.csv)");
    sub->add_option("--reference", opts.reference,
                    "reference mobility series CSV (date,value)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (opts.print_config) {
      const svip::PipelineConfig cfg = effective_config(opts, false);
      std::cout << svip::print_config(cfg);
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }

    const svip::PipelineConfig cfg = effective_config(opts, true);

    if (run->parsed()) {
      const svip::RunManifest manifest = svip::run_survey(cfg);
      print_manifest_counts(manifest);
      return 0;
    }

    svip::RunManifest manifest;
    manifest.config_digest = svip::config_digest(cfg);
    if (subsample->parsed()) {
      svip::validate_config(cfg, true);
      fs::create_directories(cfg.output_dir);
      svip::stage_subsample(cfg, manifest);
      std::cerr << "kept " << manifest.frames_kept << " of "
                << manifest.frames_in << " frames\n";
    } else if (orthorectify->parsed()) {
      svip::validate_config(cfg, false);
      svip::stage_orthorectify(cfg, manifest);
      std::cerr << "produced " << manifest.views_produced << " views\n";
    } else if (detect->parsed()) {
      svip::validate_config(cfg, false);
      svip::stage_detect(cfg, manifest);
      std::cerr << manifest.detections_raw << " raw detections\n";
    } else if (filter->parsed()) {
      svip::validate_config(cfg, false);
      svip::stage_filter(cfg, manifest);
      std::cerr << "kept " << manifest.detections_kept << " of "
                << manifest.detections_raw << " detections\n";
    } else if (geocode->parsed()) {
      svip::validate_config(cfg, false);
      svip::stage_geocode(cfg, manifest);
      std::cerr << manifest.detections_matched << " matched, "
                << manifest.detections_unmatched << " unmatched\n";
    } else if (aggregate->parsed()) {
      svip::validate_config(cfg, false);
      svip::stage_aggregate(cfg, manifest);
      std::cerr << manifest.observations << " observations\n";
    } else if (analyze->parsed()) {
      const svip::AnalysisReport report =
          svip::run_analysis(cfg, observation_paths(opts, cfg));
      std::cerr << "fit " << report.models.size() << " models over "
                << report.rows_used << " rows";
      if (report.rows_missing_attributes > 0) {
        std::cerr << " (" << report.rows_missing_attributes
                  << " dropped: missing attributes)";
      }
      std::cerr << "\n";
      if (report.correlation_computed) {
        std::cerr << "pearson r = " << report.pearson_r << " over "
                  << report.correlation_n << " aligned dates\n";
      } else {
        std::cerr << "correlation: " << report.correlation_note << "\n";
      }
    } else if (export_figures->parsed()) {
      const svip::SurveySeries series = svip::build_series_from_files(
          observation_paths(opts, cfg), cfg.excluded_dates);
      std::vector<svip::ReferencePoint> reference;
      if (!cfg.reference_series_file.empty()) {
        reference = svip::read_reference_series(cfg.reference_series_file);
      }
      fs::create_directories(cfg.output_dir);
      const fs::path out = cfg.output_dir / "figure_data.csv";
      svip::export_figure_data(series, reference, out);
      std::cerr << "wrote " << out.string() << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
