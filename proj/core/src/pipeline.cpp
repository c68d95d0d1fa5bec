#include "svip/pipeline.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "svip/csv.hpp"
#include "svip/detect.hpp"
#include "svip/error.hpp"
#include "svip/georef.hpp"
#include "svip/orthorect.hpp"
#include "svip/parallel.hpp"
#include "svip/stats.hpp"

namespace svip {

namespace fs = std::filesystem;

namespace {

fs::path out_path(const PipelineConfig& cfg, const char* name) {
  return cfg.output_dir / name;
}

double parse_double_field(const std::string& s, const char* what,
                          const fs::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + " line " + std::to_string(line) +
                     ": bad " + std::string(what) + " \"" + s + "\"");
  }
}

fs::path find_frame_image(const PipelineConfig& cfg, const std::string& frame_id) {
  static const char* kExtensions[] = {".png", ".jpg", ".jpeg", ".PNG", ".JPG"};
  for (const char* ext : kExtensions) {
    fs::path candidate = cfg.frames_dir / (frame_id + ext);
    if (fs::exists(candidate)) return candidate;
  }
  throw Error("no image found for frame \"" + frame_id + "\" in " +
              cfg.frames_dir.string());
}

std::vector<FrameRecord> read_frames_sorted_by_id(const PipelineConfig& cfg) {
  std::vector<FrameRecord> frames =
      read_frames_csv(out_path(cfg, artifact::kFramesCsv));
  std::sort(frames.begin(), frames.end(),
            [](const FrameRecord& a, const FrameRecord& b) {
              return a.frame_id < b.frame_id;
            });
  return frames;
}

std::string run_detector_command(const PipelineConfig& cfg,
                                 const fs::path& views_dir,
                                 const fs::path& detections_file) {
  std::string cmd = cfg.detector_command;
  const auto substitute = [&cmd](const std::string& token, const std::string& v) {
    std::size_t pos;
    while ((pos = cmd.find(token)) != std::string::npos) {
      cmd.replace(pos, token.size(), v);
    }
  };
  substitute("{views_dir}", views_dir.string());
  substitute("{detections_file}", detections_file.string());
  const int status = std::system(cmd.c_str());
  if (status == -1) {
    throw Error("failed to launch detector command: " + cmd);
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
    throw Error("detector command exited with status " +
                std::to_string(WEXITSTATUS(status)) + ": " + cmd);
  }
  if (!WIFEXITED(status)) {
    throw Error("detector command terminated abnormally: " + cmd);
  }
  return cmd;
}

}  // namespace

void RunManifest::validate() const {
  if (frames_kept + frames_outside_track > frames_in) {
    throw ValidationError("manifest: kept + skipped frames exceed input frames");
  }
  if (detections_kept + detections_filtered != detections_raw) {
    throw ValidationError("manifest: kept + filtered != raw detections");
  }
  if (detections_matched + detections_unmatched != detections_kept) {
    throw ValidationError("manifest: matched + unmatched != kept detections");
  }
  if (image_units_unmatched > image_units) {
    throw ValidationError("manifest: unmatched image units exceed total");
  }
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["survey_date"] = format_date(survey_date);
  j["config_digest"] = config_digest;
  j["counts"] = {
      {"frames_in", frames_in},
      {"frames_kept", frames_kept},
      {"frames_outside_track", frames_outside_track},
      {"views_produced", views_produced},
      {"detections_raw", detections_raw},
      {"detections_kept", detections_kept},
      {"detections_filtered", detections_filtered},
      {"detections_matched", detections_matched},
      {"detections_unmatched", detections_unmatched},
      {"regions_loaded", regions_loaded},
      {"image_units", image_units},
      {"image_units_unmatched", image_units_unmatched},
      {"observations", observations},
  };
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [stage, ms] : timings_ms) timings[stage] = ms;
  j["timings_ms"] = timings;
  return j.dump(2) + "\n";
}

void write_frames_csv(const std::vector<FrameRecord>& frames,
                      const fs::path& path) {
  std::string out = "frame_id,timestamp,lat,lon,survey_date\n";
  for (const FrameRecord& f : frames) {
    out += f.frame_id;
    out += ',' + format_rfc3339(f.timestamp);
    out += ',' + format_fixed(f.position.lat, 7);
    out += ',' + format_fixed(f.position.lon, 7);
    out += ',' + format_date(f.survey_date);
    out += '\n';
  }
  atomic_write_file(path, out);
}

std::vector<FrameRecord> read_frames_csv(const fs::path& path) {
  CsvReader reader(path, "frame_id,timestamp,lat,lon,survey_date");
  std::vector<FrameRecord> frames;
  std::set<std::string> seen;
  std::vector<std::string> f;
  while (reader.next(f)) {
    FrameRecord rec;
    rec.frame_id = f[0];
    if (!seen.insert(rec.frame_id).second) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": duplicate frame_id \"" + rec.frame_id + "\"");
    }
    try {
      rec.timestamp = parse_rfc3339(f[1]);
      rec.survey_date = parse_date(f[4]);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
    rec.position.lat = parse_double_field(f[2], "lat", path, reader.line());
    rec.position.lon = parse_double_field(f[3], "lon", path, reader.line());
    frames.push_back(std::move(rec));
  }
  return frames;
}

void stage_subsample(const PipelineConfig& cfg, RunManifest& manifest) {
  const GpsTrack track = load_gps_track(cfg.gps_file);
  const std::vector<FrameTime> frame_times =
      load_frame_times(cfg.frame_times_file, cfg.time_offset_s);
  manifest.frames_in = frame_times.size();

  CivilDate survey_date;
  if (cfg.survey_date) {
    survey_date = *cfg.survey_date;
  } else {
    const auto first_in_range = std::find_if(
        frame_times.begin(), frame_times.end(), [&track](const FrameTime& ft) {
          return ft.timestamp >= track.start_time() &&
                 ft.timestamp <= track.end_time();
        });
    if (first_in_range == frame_times.end()) {
      throw ValidationError("no frame timestamps fall within the GPS track span [" +
                            format_rfc3339(track.start_time()) + ", " +
                            format_rfc3339(track.end_time()) + "]");
    }
    survey_date = civil_from_millis(first_in_range->timestamp);
  }

  SubsampleOptions options;
  options.spacing_m = cfg.spacing_m;
  options.gap_reset_s = cfg.gap_reset_s;
  const SubsampleResult result =
      subsample_frames(track, frame_times, survey_date, options);
  manifest.frames_kept = result.frames.size();
  manifest.frames_outside_track = result.skipped_out_of_range;
  manifest.survey_date = survey_date;
  write_frames_csv(result.frames, out_path(cfg, artifact::kFramesCsv));
}

void stage_orthorectify(const PipelineConfig& cfg, RunManifest& manifest) {
  const std::vector<FrameRecord> frames = read_frames_sorted_by_id(cfg);
  const fs::path views_dir = out_path(cfg, artifact::kViewsDir);
  fs::create_directories(views_dir);

  const RayTable left_table(cfg.view.spec(Side::Left));
  const RayTable right_table(cfg.view.spec(Side::Right));

  parallel_for(frames.size(), cfg.jobs, [&](std::size_t i) {
    const FrameRecord& frame = frames[i];
    const EquirectImage source(load_image(find_frame_image(cfg, frame.frame_id)));
    for (const RayTable* table : {&left_table, &right_table}) {
      const Image view = orthorectify(source.image(), *table);
      const std::string name = frame.frame_id + "_" +
                               side_letter(table->spec().side) + "." +
                               cfg.view_format;
      save_image(view, views_dir / name);
    }
  });
  manifest.views_produced = frames.size() * 2;
}

void stage_detect(const PipelineConfig& cfg, RunManifest& manifest) {
  std::vector<Detection> detections;
  if (!cfg.detections_file.empty()) {
    detections = ingest_detections(cfg.detections_file, cfg.pedestrian_class_index);
  } else if (!cfg.detector_command.empty()) {
    const fs::path external = out_path(cfg, "detections_external.jsonl");
    run_detector_command(cfg, out_path(cfg, artifact::kViewsDir), external);
    if (!fs::exists(external)) {
      throw Error("detector command did not produce " + external.string());
    }
    detections = ingest_detections(external, cfg.pedestrian_class_index);
  } else {
    StubDetectorOptions options = cfg.stub;
    options.pedestrian_class_index = cfg.pedestrian_class_index;
    const std::vector<FrameRecord> frames = read_frames_sorted_by_id(cfg);
    for (const FrameRecord& frame : frames) {
      for (Side side : {Side::Left, Side::Right}) {
        std::vector<Detection> dets =
            stub_detect(frame.frame_id, side, cfg.view.out_width,
                        cfg.view.out_height, options);
        detections.insert(detections.end(),
                          std::make_move_iterator(dets.begin()),
                          std::make_move_iterator(dets.end()));
      }
    }
  }
  manifest.detections_raw = detections.size();
  write_detections(detections, out_path(cfg, artifact::kDetectionsRaw));
}

void stage_filter(const PipelineConfig& cfg, RunManifest& manifest) {
  const std::vector<Detection> raw = ingest_detections(
      out_path(cfg, artifact::kDetectionsRaw), cfg.pedestrian_class_index);
  const std::vector<Detection> kept =
      filter_by_confidence(raw, cfg.confidence_threshold);
  manifest.detections_raw = raw.size();
  manifest.detections_kept = kept.size();
  manifest.detections_filtered = raw.size() - kept.size();
  write_detections(kept, out_path(cfg, artifact::kDetectionsKept));
}

const std::string kGeocodedCsvHeader =
    "survey_date,frame_id,side,lat,lon,geoid,confidence,x,y,w,h";

std::string geocoded_to_csv(const std::vector<GeoCodedDetection>& records) {
  std::string out = kGeocodedCsvHeader + "\n";
  for (const GeoCodedDetection& rec : records) {
    out += format_date(rec.survey_date);
    out += ',' + rec.detection.frame_id;
    out += ',';
    out += side_letter(rec.detection.side);
    out += ',' + format_fixed(rec.position.lat, 7);
    out += ',' + format_fixed(rec.position.lon, 7);
    out += ',' + rec.geoid;
    out += ',' + format_fixed(rec.detection.confidence, 6);
    out += ',' + format_fixed(rec.detection.box.x, 2);
    out += ',' + format_fixed(rec.detection.box.y, 2);
    out += ',' + format_fixed(rec.detection.box.w, 2);
    out += ',' + format_fixed(rec.detection.box.h, 2);
    out += '\n';
  }
  return out;
}

std::vector<GeoCodedDetection> read_geocoded_csv(const fs::path& path) {
  CsvReader reader(path, kGeocodedCsvHeader);
  std::vector<GeoCodedDetection> records;
  std::vector<std::string> f;
  while (reader.next(f)) {
    GeoCodedDetection rec;
    try {
      rec.survey_date = parse_date(f[0]);
      rec.detection.frame_id = f[1];
      rec.detection.side = side_from_string(f[2]);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
    rec.position.lat = parse_double_field(f[3], "lat", path, reader.line());
    rec.position.lon = parse_double_field(f[4], "lon", path, reader.line());
    rec.geoid = f[5];
    rec.detection.confidence =
        parse_double_field(f[6], "confidence", path, reader.line());
    rec.detection.box.x = parse_double_field(f[7], "x", path, reader.line());
    rec.detection.box.y = parse_double_field(f[8], "y", path, reader.line());
    rec.detection.box.w = parse_double_field(f[9], "w", path, reader.line());
    rec.detection.box.h = parse_double_field(f[10], "h", path, reader.line());
    records.push_back(std::move(rec));
  }
  return records;
}

void stage_geocode(const PipelineConfig& cfg, RunManifest& manifest) {
  const std::vector<Region> regions = load_regions(cfg.geometry_file);
  manifest.regions_loaded = regions.size();
  const RegionIndex index(regions, cfg.grid_cells);

  const std::vector<FrameRecord> frames =
      read_frames_csv(out_path(cfg, artifact::kFramesCsv));
  std::unordered_map<std::string, FrameRecord> frame_map;
  for (const FrameRecord& f : frames) frame_map[f.frame_id] = f;

  const std::vector<Detection> detections = ingest_detections(
      out_path(cfg, artifact::kDetectionsKept), cfg.pedestrian_class_index);
  const GeocodeResult result = geocode_detections(detections, frame_map, index);
  manifest.detections_kept = detections.size();
  manifest.detections_unmatched = result.unmatched;
  manifest.detections_matched = detections.size() - result.unmatched;
  atomic_write_file(out_path(cfg, artifact::kGeocodedCsv),
                    geocoded_to_csv(result.records));

  std::string frame_regions = "frame_id,lat,lon,geoid\n";
  for (const FrameRecord& f : frames) {
    frame_regions += f.frame_id;
    frame_regions += ',' + format_fixed(f.position.lat, 7);
    frame_regions += ',' + format_fixed(f.position.lon, 7);
    frame_regions += ',' + index.match(f.position);
    frame_regions += '\n';
  }
  atomic_write_file(out_path(cfg, artifact::kFrameRegionsCsv), frame_regions);
}

void stage_aggregate(const PipelineConfig& cfg, RunManifest& manifest) {
  const std::vector<GeoCodedDetection> detections =
      read_geocoded_csv(out_path(cfg, artifact::kGeocodedCsv));

  CsvReader reader(out_path(cfg, artifact::kFrameRegionsCsv),
                   "frame_id,lat,lon,geoid");
  std::vector<std::string> unit_geoids;
  std::vector<std::string> f;
  const int units_per_frame = cfg.image_unit == ImageUnit::View ? 2 : 1;
  while (reader.next(f)) {
    for (int i = 0; i < units_per_frame; ++i) unit_geoids.push_back(f[3]);
  }

  CivilDate survey_date;
  if (!detections.empty()) {
    survey_date = detections.front().survey_date;
  } else {
    const std::vector<FrameRecord> frames =
        read_frames_csv(out_path(cfg, artifact::kFramesCsv));
    if (frames.empty()) {
      throw ValidationError("cannot aggregate: no frames and no detections");
    }
    survey_date = frames.front().survey_date;
  }

  const AggregateResult result =
      aggregate_survey(detections, unit_geoids, survey_date);
  manifest.image_units = unit_geoids.size();
  manifest.image_units_unmatched = result.unmatched_images;
  manifest.observations = result.observations.size();
  write_observations_csv(result.observations,
                         out_path(cfg, artifact::kObservationsCsv));
}

RunManifest run_survey(const PipelineConfig& cfg) {
  validate_config(cfg, true);
  fs::create_directories(cfg.output_dir);

  RunManifest manifest;
  manifest.config_digest = config_digest(cfg);

  using StageFn = void (*)(const PipelineConfig&, RunManifest&);
  const std::pair<const char*, StageFn> stages[] = {
      {"subsample", stage_subsample},   {"orthorectify", stage_orthorectify},
      {"detect", stage_detect},         {"filter", stage_filter},
      {"geocode", stage_geocode},       {"aggregate", stage_aggregate},
  };

  const auto cleanup = [&cfg] {
    std::error_code ec;
    for (const char* name :
         {artifact::kFramesCsv, artifact::kDetectionsRaw,
          artifact::kDetectionsKept, artifact::kGeocodedCsv,
          artifact::kFrameRegionsCsv, artifact::kObservationsCsv,
          artifact::kManifestJson, "detections_external.jsonl"}) {
      fs::remove(out_path(cfg, name), ec);
    }
    fs::remove_all(out_path(cfg, artifact::kViewsDir), ec);
  };

  for (const auto& [name, fn] : stages) {
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(cfg, manifest);
    } catch (const std::exception& e) {
      cleanup();
      throw Error("stage " + std::string(name) + " failed: " + e.what());
    }
    const auto end = std::chrono::steady_clock::now();
    manifest.timings_ms.emplace_back(
        name, std::chrono::duration<double, std::milli>(end - start).count());
  }

  manifest.validate();
  atomic_write_file(out_path(cfg, artifact::kManifestJson), manifest.to_json());
  return manifest;
}

std::vector<ReferencePoint> read_reference_series(const fs::path& path) {
  CsvReader reader(path, "date,value");
  std::vector<ReferencePoint> points;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ReferencePoint pt;
    try {
      pt.date = parse_date(f[0]);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
    pt.value = parse_double_field(f[1], "value", path, reader.line());
    points.push_back(pt);
  }
  std::sort(points.begin(), points.end(),
            [](const ReferencePoint& a, const ReferencePoint& b) {
              return a.date < b.date;
            });
  return points;
}

SurveySeries build_series_from_files(
    const std::vector<fs::path>& observation_files,
    const std::vector<CivilDate>& excluded_dates) {
  std::vector<SurveyObservation> all;
  for (const fs::path& file : observation_files) {
    std::vector<SurveyObservation> obs = read_observations_csv(file);
    all.insert(all.end(), std::make_move_iterator(obs.begin()),
               std::make_move_iterator(obs.end()));
  }
  std::erase_if(all, [&excluded_dates](const SurveyObservation& o) {
    return std::find(excluded_dates.begin(), excluded_dates.end(),
                     o.survey_date) != excluded_dates.end();
  });
  return build_series(all);
}

namespace {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_regression_reports(const RegressionResult& fit,
                              const std::string& metric,
                              const fs::path& analysis_dir) {
  std::string coef = "label,coef,se,t,p,ci_lo,ci_hi\n";
  for (const CoefficientEstimate& c : fit.coefficients) {
    coef += c.label;
    coef += ',' + format_g(c.coef);
    coef += ',' + format_g(c.std_error);
    coef += ',' + format_g(c.t_value);
    coef += ',' + format_g(c.p_value);
    coef += ',' + format_g(c.ci_low);
    coef += ',' + format_g(c.ci_high);
    coef += '\n';
  }
  atomic_write_file(analysis_dir / ("regression_" + metric + "_coefficients.csv"),
                    coef);

  std::string summary = "r2,adj_r2,f,f_p,loglik,n,df_resid\n";
  summary += format_g(fit.r_squared);
  summary += ',' + format_g(fit.adj_r_squared);
  summary += ',' + format_g(fit.f_statistic);
  summary += ',' + format_g(fit.f_pvalue);
  summary += ',' + format_g(fit.log_likelihood);
  summary += ',' + std::to_string(fit.n_observations);
  summary += ',' + std::to_string(fit.df_residuals);
  summary += '\n';
  atomic_write_file(analysis_dir / ("regression_" + metric + "_summary.csv"),
                    summary);
}

std::string metric_name(int subset_k) {
  return subset_k == 0 ? "det_per_image"
                       : "sub" + std::to_string(subset_k) + "_per_image";
}

}  // namespace

AnalysisReport run_analysis(const PipelineConfig& cfg,
                            const std::vector<fs::path>& observation_files) {
  if (observation_files.empty()) {
    throw ValidationError("run_analysis needs at least one observation file");
  }
  std::vector<SurveyObservation> observations;
  for (const fs::path& file : observation_files) {
    std::vector<SurveyObservation> obs = read_observations_csv(file);
    observations.insert(observations.end(), std::make_move_iterator(obs.begin()),
                        std::make_move_iterator(obs.end()));
  }

  AnalysisReport report;
  report.rows_in = observations.size();
  std::erase_if(observations, [&cfg](const SurveyObservation& o) {
    return std::find(cfg.excluded_dates.begin(), cfg.excluded_dates.end(),
                     o.survey_date) != cfg.excluded_dates.end();
  });
  report.rows_excluded_dates = report.rows_in - observations.size();
  if (observations.empty()) {
    throw ValidationError("no observations left after date exclusion (read " +
                          std::to_string(report.rows_in) + " rows)");
  }
  std::sort(observations.begin(), observations.end(),
            [](const SurveyObservation& a, const SurveyObservation& b) {
              if (a.survey_date != b.survey_date)
                return a.survey_date < b.survey_date;
              return a.geoid < b.geoid;
            });

  const std::vector<TractAttributes> attributes =
      load_tract_attributes(cfg.attributes_file);
  const Encoder encoder(cfg.encoding, attributes);
  std::vector<EncodedObservation> rows;
  rows.reserve(observations.size());
  for (const SurveyObservation& obs : observations) {
    if (auto row = encoder.encode(obs)) {
      rows.push_back(*row);
    } else {
      ++report.rows_missing_attributes;
    }
  }
  report.rows_used = rows.size();

  const fs::path analysis_dir = out_path(cfg, artifact::kAnalysisDir);
  fs::create_directories(analysis_dir);
  for (int k = 0; k <= kMaxSubsetK; ++k) {
    const RegressionResult fit = ols_fit(build_design(rows, k));
    write_regression_reports(fit, metric_name(k), analysis_dir);
    report.models.push_back(metric_name(k));
  }

  const SurveySeries series = build_series(observations);
  std::string series_csv =
      "date,det_per_image,sub1_per_image,sub2_per_image,sub3_per_image,"
      "sub4_per_image\n";
  for (const SeriesPoint& pt : series.points) {
    series_csv += format_date(pt.date);
    series_csv += ',' + format_fixed(pt.det_per_image, 6);
    for (int k = 0; k < kMaxSubsetK; ++k) {
      series_csv += ',' + format_fixed(pt.subset_per_image[k], 6);
    }
    series_csv += '\n';
  }
  atomic_write_file(analysis_dir / "series.csv", series_csv);

  if (cfg.reference_series_file.empty()) {
    report.correlation_note = "no reference series configured";
  } else {
    const std::vector<ReferencePoint> reference =
        read_reference_series(cfg.reference_series_file);
    std::vector<double> ours, theirs;
    for (const SeriesPoint& pt : series.points) {
      const auto it = std::find_if(reference.begin(), reference.end(),
                                   [&pt](const ReferencePoint& r) {
                                     return r.date == pt.date;
                                   });
      if (it != reference.end()) {
        ours.push_back(pt.det_per_image);
        theirs.push_back(it->value);
      }
    }
    if (ours.size() < 2) {
      report.correlation_note = "fewer than 2 aligned dates (" +
                                std::to_string(ours.size()) +
                                "); correlation skipped";
    } else {
      report.pearson_r = pearson_corr(ours, theirs);
      report.correlation_n = ours.size();
      report.correlation_computed = true;
      std::string pearson = "n,pearson_r\n";
      pearson += std::to_string(ours.size());
      pearson += ',' + format_fixed(report.pearson_r, 6);
      pearson += '\n';
      atomic_write_file(analysis_dir / "pearson.csv", pearson);
    }
  }

  nlohmann::json j;
  j["rows_in"] = report.rows_in;
  j["rows_excluded_dates"] = report.rows_excluded_dates;
  j["rows_missing_attributes"] = report.rows_missing_attributes;
  j["rows_used"] = report.rows_used;
  j["models"] = report.models;
  if (report.correlation_computed) {
    j["correlation"] = {{"status", "computed"},
                        {"n", report.correlation_n},
                        {"pearson_r", report.pearson_r}};
  } else {
    j["correlation"] = {{"status", "skipped"},
                        {"reason", report.correlation_note}};
  }
  atomic_write_file(analysis_dir / "analysis_summary.json", j.dump(2) + "\n");
  return report;
}

void export_figure_data(const SurveySeries& series,
                        const std::vector<ReferencePoint>& reference,
                        const fs::path& path) {
  if (series.points.empty()) {
    throw ValidationError("export_figure_data needs a nonempty series");
  }
  std::string out = "date,metric,value\n";
  for (const SeriesPoint& pt : series.points) {
    out += format_date(pt.date) + ",det_per_image," +
           format_fixed(pt.det_per_image, 6) + "\n";
    for (int k = 0; k < kMaxSubsetK; ++k) {
      out += format_date(pt.date) + ",sub" + std::to_string(k + 1) +
             "_per_image," + format_fixed(pt.subset_per_image[k], 6) + "\n";
    }
  }
  for (const ReferencePoint& pt : reference) {
    out += format_date(pt.date) + ",reference," + format_fixed(pt.value, 6) +
           "\n";
  }
  atomic_write_file(path, out);
}

}  // namespace svip
