#include "svip/aggregate.hpp"

#include <algorithm>
#include <map>

#include "svip/csv.hpp"
#include "svip/error.hpp"

namespace svip {

ImageUnit image_unit_from_string(const std::string& s) {
  if (s == "view") return ImageUnit::View;
  if (s == "frame") return ImageUnit::Frame;
  throw ConfigError("image_unit must be \"view\" or \"frame\", got \"" + s +
                    "\"");
}

std::string to_string(ImageUnit unit) {
  return unit == ImageUnit::View ? "view" : "frame";
}

std::int64_t count_subset_k(std::span<const std::int64_t> view_detection_counts,
                            int k) {
  if (k < 1) {
    throw ValidationError("subset k must be >= 1, got " + std::to_string(k));
  }
  std::int64_t total = 0;
  for (std::int64_t c : view_detection_counts) {
    if (c >= k + 1) total += c;
  }
  return total;
}

AggregateResult aggregate_survey(const std::vector<GeoCodedDetection>& detections,
                                 const std::vector<std::string>& image_unit_geoids,
                                 const CivilDate& survey_date) {
  AggregateResult result;

  std::map<std::string, std::int64_t> images_per_geoid;
  for (const std::string& geoid : image_unit_geoids) {
    if (geoid == kUnmatchedGeoid) {
      ++result.unmatched_images;
      continue;
    }
    ++images_per_geoid[geoid];
  }

  // Per-view detection counts; a view's detections all share the frame
  // position, so a view never straddles regions.
  struct ViewCount {
    std::string geoid;
    std::int64_t count = 0;
  };
  std::map<std::pair<std::string, char>, ViewCount> view_counts;
  std::map<std::string, std::int64_t> detections_per_geoid;
  for (const GeoCodedDetection& rec : detections) {
    if (rec.survey_date != survey_date) {
      throw ValidationError(
          "aggregate_survey expects a single survey date; got " +
          format_date(rec.survey_date) + " and " + format_date(survey_date));
    }
    if (rec.geoid == kUnmatchedGeoid) {
      ++result.unmatched_detections;
      continue;
    }
    ++detections_per_geoid[rec.geoid];
    auto& vc = view_counts[{rec.detection.frame_id,
                            side_letter(rec.detection.side)}];
    vc.geoid = rec.geoid;
    ++vc.count;
  }

  std::map<std::string, std::array<std::int64_t, kMaxSubsetK>> subset_per_geoid;
  for (const auto& [key, vc] : view_counts) {
    for (int k = 1; k <= kMaxSubsetK; ++k) {
      if (vc.count >= k + 1) subset_per_geoid[vc.geoid][k - 1] += vc.count;
    }
  }

  for (const auto& [geoid, n_dets] : detections_per_geoid) {
    if (images_per_geoid.find(geoid) == images_per_geoid.end()) {
      throw ValidationError("region " + geoid + " has " +
                            std::to_string(n_dets) +
                            " detections but zero images; detections must "
                            "inherit frame positions");
    }
  }

  for (const auto& [geoid, n_images] : images_per_geoid) {
    SurveyObservation obs;
    obs.survey_date = survey_date;
    obs.geoid = geoid;
    obs.n_images = n_images;
    const auto dit = detections_per_geoid.find(geoid);
    obs.n_detections = dit == detections_per_geoid.end() ? 0 : dit->second;
    obs.detections_per_image = double(obs.n_detections) / double(n_images);
    const auto sit = subset_per_geoid.find(geoid);
    if (sit != subset_per_geoid.end()) obs.subset_counts = sit->second;
    for (int k = 0; k < kMaxSubsetK; ++k) {
      obs.subset_per_image[k] = double(obs.subset_counts[k]) / double(n_images);
    }
    result.observations.push_back(std::move(obs));
  }
  return result;
}

SurveySeries build_series(const std::vector<SurveyObservation>& observations) {
  if (observations.empty()) {
    throw ValidationError("build_series needs at least one observation");
  }
  struct Totals {
    std::int64_t images = 0;
    std::int64_t detections = 0;
    std::array<std::int64_t, kMaxSubsetK> subsets{};
  };
  std::map<CivilDate, Totals> by_date;
  for (const SurveyObservation& obs : observations) {
    Totals& t = by_date[obs.survey_date];
    t.images += obs.n_images;
    t.detections += obs.n_detections;
    for (int k = 0; k < kMaxSubsetK; ++k) t.subsets[k] += obs.subset_counts[k];
  }

  SurveySeries series;
  for (const auto& [date, t] : by_date) {
    SeriesPoint pt;
    pt.date = date;
    pt.det_per_image = t.images > 0 ? double(t.detections) / double(t.images) : 0.0;
    for (int k = 0; k < kMaxSubsetK; ++k) {
      pt.subset_per_image[k] =
          t.images > 0 ? double(t.subsets[k]) / double(t.images) : 0.0;
    }
    series.points.push_back(pt);
  }
  return series;
}

const std::string kObservationCsvHeader =
    "survey_date,geoid,n_images,n_detections,det_per_image,"
    "sub1,sub2,sub3,sub4,"
    "sub1_per_image,sub2_per_image,sub3_per_image,sub4_per_image";

std::string observations_to_csv(std::vector<SurveyObservation> observations) {
  std::sort(observations.begin(), observations.end(),
            [](const SurveyObservation& a, const SurveyObservation& b) {
              if (a.survey_date != b.survey_date)
                return a.survey_date < b.survey_date;
              return a.geoid < b.geoid;
            });
  std::string out = kObservationCsvHeader + "\n";
  for (const SurveyObservation& obs : observations) {
    out += format_date(obs.survey_date);
    out += ',' + obs.geoid;
    out += ',' + std::to_string(obs.n_images);
    out += ',' + std::to_string(obs.n_detections);
    out += ',' + format_fixed(obs.detections_per_image, 6);
    for (int k = 0; k < kMaxSubsetK; ++k) {
      out += ',' + std::to_string(obs.subset_counts[k]);
    }
    for (int k = 0; k < kMaxSubsetK; ++k) {
      out += ',' + format_fixed(obs.subset_per_image[k], 6);
    }
    out += '\n';
  }
  return out;
}

void write_observations_csv(std::vector<SurveyObservation> observations,
                            const std::filesystem::path& path) {
  atomic_write_file(path, observations_to_csv(std::move(observations)));
}

std::vector<SurveyObservation> read_observations_csv(
    const std::filesystem::path& path) {
  CsvReader reader(path, kObservationCsvHeader);
  std::vector<SurveyObservation> observations;
  std::vector<std::string> f;
  while (reader.next(f)) {
    try {
      SurveyObservation obs;
      obs.survey_date = parse_date(f[0]);
      obs.geoid = f[1];
      obs.n_images = std::stoll(f[2]);
      obs.n_detections = std::stoll(f[3]);
      obs.detections_per_image = std::stod(f[4]);
      for (int k = 0; k < kMaxSubsetK; ++k) {
        obs.subset_counts[k] = std::stoll(f[5 + k]);
        obs.subset_per_image[k] = std::stod(f[9 + k]);
      }
      observations.push_back(std::move(obs));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
  }
  return observations;
}

}  // namespace svip
