#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svip/aggregate.hpp"
#include "svip/config.hpp"
#include "svip/geotrack.hpp"

namespace svip {

/// Per-run accounting. Count algebra (kept <= raw etc.) is validated before
/// the manifest is written.
struct RunManifest {
  CivilDate survey_date;
  std::string config_digest;

  std::size_t frames_in = 0;
  std::size_t frames_kept = 0;
  std::size_t frames_outside_track = 0;
  std::size_t views_produced = 0;
  std::size_t detections_raw = 0;
  std::size_t detections_kept = 0;
  std::size_t detections_filtered = 0;
  std::size_t detections_matched = 0;
  std::size_t detections_unmatched = 0;
  std::size_t regions_loaded = 0;
  std::size_t image_units = 0;
  std::size_t image_units_unmatched = 0;
  std::size_t observations = 0;

  /// Stage name -> wall-clock milliseconds, in execution order.
  std::vector<std::pair<std::string, double>> timings_ms;

  void validate() const;
  std::string to_json() const;
};

/// Well-known artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kFramesCsv = "frames.csv";
inline constexpr const char* kViewsDir = "views";
inline constexpr const char* kDetectionsRaw = "detections.jsonl";
inline constexpr const char* kDetectionsKept = "detections_kept.jsonl";
inline constexpr const char* kGeocodedCsv = "geocoded_detections.csv";
inline constexpr const char* kFrameRegionsCsv = "frame_regions.csv";
inline constexpr const char* kObservationsCsv = "observations.csv";
inline constexpr const char* kManifestJson = "manifest.json";
inline constexpr const char* kAnalysisDir = "analysis";
}  // namespace artifact

/// Individual stages; each reads its upstream artifacts from
/// cfg.output_dir and writes its own atomically. All are deterministic for
/// fixed inputs regardless of cfg.jobs.
void stage_subsample(const PipelineConfig& cfg, RunManifest& manifest);
void stage_orthorectify(const PipelineConfig& cfg, RunManifest& manifest);
void stage_detect(const PipelineConfig& cfg, RunManifest& manifest);
void stage_filter(const PipelineConfig& cfg, RunManifest& manifest);
void stage_geocode(const PipelineConfig& cfg, RunManifest& manifest);
void stage_aggregate(const PipelineConfig& cfg, RunManifest& manifest);

/// Runs the full chain (subsample, orthorectify, detect, filter, geocode,
/// aggregate) and writes the manifest. On any stage error the run's partial
/// outputs are removed and the error is rethrown naming the stage.
RunManifest run_survey(const PipelineConfig& cfg);

/// The frames.csv intermediate.
void write_frames_csv(const std::vector<FrameRecord>& frames,
                      const std::filesystem::path& path);
std::vector<FrameRecord> read_frames_csv(const std::filesystem::path& path);

/// Geocoded detections in the analysis-ready CSV schema
/// `survey_date,frame_id,side,lat,lon,geoid,confidence,x,y,w,h`.
extern const std::string kGeocodedCsvHeader;

std::string geocoded_to_csv(const std::vector<GeoCodedDetection>& records);

/// Reads the analysis-ready CSV back. The softmax vectors are not part of
/// the CSV product, so the returned detections carry empty scores.
std::vector<GeoCodedDetection> read_geocoded_csv(
    const std::filesystem::path& path);

/// Concatenates observation CSVs, drops excluded survey dates, and pools
/// the citywide series.
SurveySeries build_series_from_files(
    const std::vector<std::filesystem::path>& observation_files,
    const std::vector<CivilDate>& excluded_dates);

struct ReferencePoint {
  CivilDate date;
  double value = 0.0;
};

/// CSV with header `date,value`.
std::vector<ReferencePoint> read_reference_series(
    const std::filesystem::path& path);

struct AnalysisReport {
  std::size_t rows_in = 0;
  std::size_t rows_excluded_dates = 0;
  std::size_t rows_missing_attributes = 0;
  std::size_t rows_used = 0;
  std::vector<std::string> models;  // metric names in fit order
  bool correlation_computed = false;
  std::string correlation_note;
  double pearson_r = 0.0;
  std::size_t correlation_n = 0;
};

/// Fits the regression for detections per image and each subset ratio,
/// writes per-model coefficient and summary CSVs, the survey series CSV,
/// and (when a reference series is configured and aligns on >= 2 dates)
/// the Pearson correlation report.
AnalysisReport run_analysis(const PipelineConfig& cfg,
                            const std::vector<std::filesystem::path>& observation_files);

/// Long-format CSV `date,metric,value`, one row per survey per metric, for
/// external plotting tools.
void export_figure_data(const SurveySeries& series,
                        const std::vector<ReferencePoint>& reference,
                        const std::filesystem::path& path);

}  // namespace svip
