#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svip/aggregate.hpp"
#include "svip/detect.hpp"
#include "svip/stats.hpp"
#include "svip/timestamp.hpp"

namespace svip {

/// Per-view projection parameters; Left/Right share everything but yaw.
struct ViewConfig {
  double hfov_deg = 100.0;
  double vfov_deg = 67.0;
  double pitch_deg = 0.0;
  double left_yaw_deg = -90.0;
  double right_yaw_deg = 90.0;
  int out_width = 1920;
  int out_height = 1280;

  ViewSpec spec(Side side) const;
};

struct PipelineConfig {
  // Inputs.
  std::filesystem::path frames_dir;
  std::filesystem::path gps_file;
  std::filesystem::path frame_times_file;
  std::filesystem::path geometry_file;
  std::filesystem::path attributes_file;
  std::filesystem::path detections_file;   // pre-computed detections, optional
  std::string detector_command;            // external CNN template, optional
  std::filesystem::path reference_series_file;  // optional, for Fig-4 style reports
  std::filesystem::path output_dir = "out";

  // Geometry / sampling.
  double spacing_m = 4.0;
  double gap_reset_s = 30.0;
  double time_offset_s = 0.0;
  std::optional<CivilDate> survey_date;  // default: date of first kept frame
  ViewConfig view;
  std::string view_format = "png";

  // Detection.
  double confidence_threshold = 0.80;
  int pedestrian_class_index = -1;  // -1 = last softmax entry
  StubDetectorOptions stub;

  // Geocoding / aggregation.
  int grid_cells = 64;
  ImageUnit image_unit = ImageUnit::View;
  std::vector<CivilDate> excluded_dates;

  // Analysis.
  EncodingConfig encoding;

  // Execution.
  int jobs = 1;
};

/// Parses the single-file key = value configuration (# comments, optional
/// double quotes around values, dotted keys for subsections). Unknown keys
/// are an error.
PipelineConfig parse_config_text(const std::string& text,
                                 const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Effective configuration in the same key = value form (parseable).
std::string print_config(const PipelineConfig& cfg);

/// Checks value ranges; with check_paths also verifies referenced input
/// files exist. Throws ConfigError.
void validate_config(const PipelineConfig& cfg, bool check_paths);

/// FNV-1a digest of the printed effective configuration.
std::string config_digest(const PipelineConfig& cfg);

}  // namespace svip
