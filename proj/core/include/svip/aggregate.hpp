#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "svip/georef.hpp"
#include "svip/timestamp.hpp"

namespace svip {

inline constexpr int kMaxSubsetK = 4;

/// Whether the per-image denominator counts orthorectified views (L and R
/// separately) or original 360-degree frames.
enum class ImageUnit { View, Frame };

ImageUnit image_unit_from_string(const std::string& s);
std::string to_string(ImageUnit unit);

/// One (survey date x region) row of the mobility dataset.
struct SurveyObservation {
  CivilDate survey_date;
  std::string geoid;
  std::int64_t n_images = 0;
  std::int64_t n_detections = 0;
  double detections_per_image = 0.0;
  /// subset_counts[k-1]: detections sharing a view with >= k others.
  std::array<std::int64_t, kMaxSubsetK> subset_counts{};
  std::array<double, kMaxSubsetK> subset_per_image{};
};

/// Detections sharing a view with at least k others: a view holding c
/// detections contributes c when c >= k+1, else 0.
std::int64_t count_subset_k(std::span<const std::int64_t> view_detection_counts,
                            int k);

struct AggregateResult {
  std::vector<SurveyObservation> observations;  // sorted by geoid
  std::size_t unmatched_detections = 0;
  std::size_t unmatched_images = 0;
};

/// Reduces one survey's geocoded detections to per-region observations.
/// image_unit_geoids carries one entry per image unit (view or frame).
/// Regions with images but no detections appear with zero ratios; a region
/// with detections but no images is an integrity error.
AggregateResult aggregate_survey(const std::vector<GeoCodedDetection>& detections,
                                 const std::vector<std::string>& image_unit_geoids,
                                 const CivilDate& survey_date);

struct SeriesPoint {
  CivilDate date;
  double det_per_image = 0.0;
  std::array<double, kMaxSubsetK> subset_per_image{};
};

/// Citywide ratios per survey, pooled as total detections / total images
/// (not the mean of per-region ratios). Dates strictly increasing.
struct SurveySeries {
  std::vector<SeriesPoint> points;
};

SurveySeries build_series(const std::vector<SurveyObservation>& observations);

/// Observation CSV, sorted by (survey_date, geoid), ratios with 6 decimals.
extern const std::string kObservationCsvHeader;

std::string observations_to_csv(std::vector<SurveyObservation> observations);
void write_observations_csv(std::vector<SurveyObservation> observations,
                            const std::filesystem::path& path);
std::vector<SurveyObservation> read_observations_csv(
    const std::filesystem::path& path);

}  // namespace svip
