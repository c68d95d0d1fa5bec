#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "svip/timestamp.hpp"

namespace svip {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

/// WGS84 position in degrees. lat in [-90, 90], lon in [-180, 180).
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

bool valid_geopoint(const GeoPoint& p);

struct GpsFix {
  UtcMillis timestamp = 0;
  GeoPoint position;
};

/// An ordered GPS trace. Timestamps are strictly increasing and there are
/// at least two fixes; the constructor enforces both.
class GpsTrack {
 public:
  explicit GpsTrack(std::vector<GpsFix> fixes);

  const std::vector<GpsFix>& fixes() const { return fixes_; }
  UtcMillis start_time() const { return fixes_.front().timestamp; }
  UtcMillis end_time() const { return fixes_.back().timestamp; }

 private:
  std::vector<GpsFix> fixes_;
};

/// A frame selected for processing, positioned by interpolation within the
/// GPS track.
struct FrameRecord {
  std::string frame_id;
  UtcMillis timestamp = 0;
  GeoPoint position;
  CivilDate survey_date;
};

struct FrameTime {
  std::string frame_id;
  UtcMillis timestamp = 0;
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

/// Per-coordinate linear interpolation between the two bracketing fixes.
/// Throws std::out_of_range (message includes the track span) when t is
/// outside [start_time, end_time].
GeoPoint interpolate_position(const GpsTrack& track, UtcMillis t);

struct SubsampleOptions {
  double spacing_m = 4.0;
  /// A gap between consecutive GPS fixes longer than this resets the greedy
  /// walk: the first frame after the gap is always kept. <= 0 disables.
  double gap_reset_s = 30.0;
};

struct SubsampleResult {
  std::vector<FrameRecord> frames;
  /// Frames whose timestamp fell outside the track span.
  std::size_t skipped_out_of_range = 0;
};

/// Greedy selection: the first in-range frame is kept; afterwards a frame is
/// kept iff its interpolated position is at least spacing_m from the last
/// kept frame (or a GPS gap reset applies). frame_times must be sorted
/// ascending. Output preserves temporal order.
SubsampleResult subsample_frames(const GpsTrack& track,
                                 const std::vector<FrameTime>& frame_times,
                                 const CivilDate& survey_date,
                                 const SubsampleOptions& options = {});

/// CSV with header `timestamp,lat,lon`, RFC 3339 timestamps.
GpsTrack load_gps_track(const std::filesystem::path& path);

/// CSV with header `frame_id,timestamp`. offset_s is added to every
/// timestamp (camera-to-GPS clock offset). Result sorted check is the
/// caller's contract; this loader validates it.
std::vector<FrameTime> load_frame_times(const std::filesystem::path& path,
                                        double offset_s = 0.0);

}  // namespace svip
