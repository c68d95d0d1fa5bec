#include "svip/geotrack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svip/csv.hpp"
#include "svip/error.hpp"

namespace svip {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double parse_double_field(const std::string& s, const char* what,
                          const std::filesystem::path& path, std::size_t line) {
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

}  // namespace

bool valid_geopoint(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon < 180.0;
}

GpsTrack::GpsTrack(std::vector<GpsFix> fixes) : fixes_(std::move(fixes)) {
  if (fixes_.size() < 2) {
    throw ValidationError("GPS track needs at least 2 fixes, got " +
                          std::to_string(fixes_.size()));
  }
  for (std::size_t i = 0; i < fixes_.size(); ++i) {
    if (!valid_geopoint(fixes_[i].position)) {
      throw ValidationError("GPS fix " + std::to_string(i) +
                            " has an invalid position");
    }
    if (i > 0 && fixes_[i].timestamp <= fixes_[i - 1].timestamp) {
      throw ValidationError(
          "GPS fix timestamps must be strictly increasing; fix " +
          std::to_string(i) + " at " + format_rfc3339(fixes_[i].timestamp) +
          " does not follow " + format_rfc3339(fixes_[i - 1].timestamp));
    }
  }
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double sin_dlat = std::sin(dlat / 2.0);
  const double sin_dlon = std::sin(dlon / 2.0);
  const double h =
      sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint interpolate_position(const GpsTrack& track, UtcMillis t) {
  const auto& fixes = track.fixes();
  if (t < track.start_time() || t > track.end_time()) {
    throw std::out_of_range(
        "timestamp " + format_rfc3339(t) + " outside track span [" +
        format_rfc3339(track.start_time()) + ", " +
        format_rfc3339(track.end_time()) + "]");
  }
  const auto it = std::lower_bound(
      fixes.begin(), fixes.end(), t,
      [](const GpsFix& f, UtcMillis v) { return f.timestamp < v; });
  if (it->timestamp == t) return it->position;
  const GpsFix& hi = *it;
  const GpsFix& lo = *(it - 1);
  const double w = double(t - lo.timestamp) / double(hi.timestamp - lo.timestamp);
  return GeoPoint{lo.position.lat + w * (hi.position.lat - lo.position.lat),
                  lo.position.lon + w * (hi.position.lon - lo.position.lon)};
}

SubsampleResult subsample_frames(const GpsTrack& track,
                                 const std::vector<FrameTime>& frame_times,
                                 const CivilDate& survey_date,
                                 const SubsampleOptions& options) {
  if (options.spacing_m <= 0.0) {
    throw ValidationError("subsample spacing must be > 0, got " +
                          std::to_string(options.spacing_m));
  }
  for (std::size_t i = 1; i < frame_times.size(); ++i) {
    if (frame_times[i].timestamp < frame_times[i - 1].timestamp) {
      throw ValidationError("frame times must be sorted ascending; frame \"" +
                            frame_times[i].frame_id + "\" is out of order");
    }
  }

  // Track timestamps that end a GPS gap longer than the reset threshold.
  std::vector<UtcMillis> gap_ends;
  if (options.gap_reset_s > 0.0) {
    const auto gap_ms = static_cast<std::int64_t>(options.gap_reset_s * 1000.0);
    const auto& fixes = track.fixes();
    for (std::size_t i = 1; i < fixes.size(); ++i) {
      if (fixes[i].timestamp - fixes[i - 1].timestamp > gap_ms) {
        gap_ends.push_back(fixes[i].timestamp);
      }
    }
  }
  const auto gap_between = [&gap_ends](UtcMillis a, UtcMillis b) {
    // Any gap end in (a, b]?
    const auto it = std::upper_bound(gap_ends.begin(), gap_ends.end(), a);
    return it != gap_ends.end() && *it <= b;
  };

  SubsampleResult result;
  bool have_last = false;
  GeoPoint last_pos;
  UtcMillis last_time = 0;
  for (const FrameTime& ft : frame_times) {
    if (ft.timestamp < track.start_time() || ft.timestamp > track.end_time()) {
      ++result.skipped_out_of_range;
      continue;
    }
    const GeoPoint pos = interpolate_position(track, ft.timestamp);
    bool keep = !have_last;
    if (!keep && gap_between(last_time, ft.timestamp)) keep = true;
    if (!keep && haversine_distance(last_pos, pos) >= options.spacing_m) {
      keep = true;
    }
    if (keep) {
      result.frames.push_back(
          FrameRecord{ft.frame_id, ft.timestamp, pos, survey_date});
      have_last = true;
      last_pos = pos;
      last_time = ft.timestamp;
    }
  }
  return result;
}

GpsTrack load_gps_track(const std::filesystem::path& path) {
  CsvReader reader(path, "timestamp,lat,lon");
  std::vector<GpsFix> fixes;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    GpsFix fix;
    try {
      fix.timestamp = parse_rfc3339(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
    fix.position.lat = parse_double_field(fields[1], "lat", path, reader.line());
    fix.position.lon = parse_double_field(fields[2], "lon", path, reader.line());
    if (!valid_geopoint(fix.position)) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": position out of range (" + fields[1] + ", " +
                       fields[2] + ")");
    }
    fixes.push_back(fix);
  }
  try {
    return GpsTrack(std::move(fixes));
  } catch (const ValidationError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<FrameTime> load_frame_times(const std::filesystem::path& path,
                                        double offset_s) {
  CsvReader reader(path, "frame_id,timestamp");
  const auto offset_ms = static_cast<std::int64_t>(std::llround(offset_s * 1000.0));
  std::vector<FrameTime> times;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields[0].empty()) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": empty frame_id");
    }
    FrameTime ft;
    ft.frame_id = fields[0];
    try {
      ft.timestamp = parse_rfc3339(fields[1]) + offset_ms;
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": " + e.what());
    }
    times.push_back(std::move(ft));
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i].timestamp < times[i - 1].timestamp) {
      throw ParseError(path.string() + ": frame times not sorted at \"" +
                       times[i].frame_id + "\"");
    }
  }
  return times;
}

}  // namespace svip
