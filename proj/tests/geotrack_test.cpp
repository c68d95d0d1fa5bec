#include "svip/geotrack.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svip/error.hpp"
#include "testutil.hpp"

namespace svip {
namespace {

TEST(Haversine, IdenticalPointsAreZero) {
  const GeoPoint p{47.6, -122.3};
  EXPECT_DOUBLE_EQ(haversine_distance(p, p), 0.0);
}

TEST(Haversine, OneDegreeAlongEquator) {
  // R * pi / 180 exactly, since the equator is a great circle.
  const double expected = kEarthRadiusMeters * M_PI / 180.0;
  const double d = haversine_distance(GeoPoint{0, 0}, GeoPoint{0, 1});
  EXPECT_NEAR(d, 111194.9, 0.5);
  EXPECT_NEAR(d, expected, 1e-6);
}

TEST(Haversine, SeattlePairMatchesIndependentFormula) {
  const GeoPoint a{47.6062, -122.3321};
  const GeoPoint b{47.6205, -122.3493};
  const double expected = oracle::great_circle_distance(a, b);
  EXPECT_NEAR(haversine_distance(a, b), expected, 1e-6 * expected);
}

TEST(Haversine, SymmetryAndTriangleInequalityOnRandomTriples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-80.0, 80.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  for (int trial = 0; trial < 500; ++trial) {
    const GeoPoint a{lat(rng), lon(rng)};
    const GeoPoint b{lat(rng), lon(rng)};
    const GeoPoint c{lat(rng), lon(rng)};
    const double ab = haversine_distance(a, b);
    const double ba = haversine_distance(b, a);
    EXPECT_DOUBLE_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, haversine_distance(a, c) + haversine_distance(c, b) + 1e-6);
  }
}

GpsTrack simple_track() {
  return GpsTrack({{0, {0.0, 0.0}}, {10'000, {0.001, 0.001}}});
}

TEST(Interpolate, ReproducesKnots) {
  const GpsTrack track({{1'000, {47.0, -122.0}},
                        {2'000, {47.1, -122.1}},
                        {5'000, {47.3, -122.2}}});
  for (const GpsFix& fix : track.fixes()) {
    const GeoPoint p = interpolate_position(track, fix.timestamp);
    EXPECT_DOUBLE_EQ(p.lat, fix.position.lat);
    EXPECT_DOUBLE_EQ(p.lon, fix.position.lon);
  }
}

TEST(Interpolate, MidpointAndQuarterPoint) {
  const GpsTrack track = simple_track();
  const GeoPoint mid = interpolate_position(track, 5'000);
  EXPECT_DOUBLE_EQ(mid.lat, 0.0005);
  EXPECT_DOUBLE_EQ(mid.lon, 0.0005);
  const GeoPoint quarter = interpolate_position(track, 2'500);
  EXPECT_DOUBLE_EQ(quarter.lat, 0.00025);
  EXPECT_DOUBLE_EQ(quarter.lon, 0.00025);
}

TEST(Interpolate, OutOfRangeReportsSpan) {
  const GpsTrack track = simple_track();
  try {
    interpolate_position(track, 20'000);
    FAIL() << "expected out_of_range";
  } catch (const std::out_of_range& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("1970-01-01T00:00:00.000Z"), std::string::npos);
    EXPECT_NE(what.find("1970-01-01T00:00:10.000Z"), std::string::npos);
  }
}

TEST(Interpolate, MonotoneAlongMonotoneSegments) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(1e-5, 1e-3);
  std::vector<GpsFix> fixes;
  double lat = 10.0, lon = 20.0;
  for (int i = 0; i < 20; ++i) {
    fixes.push_back({i * 1'000, {lat, lon}});
    lat += step(rng);
    lon += step(rng);
  }
  const GpsTrack track(std::move(fixes));
  GeoPoint prev = interpolate_position(track, 0);
  for (UtcMillis t = 100; t <= 19'000; t += 100) {
    const GeoPoint p = interpolate_position(track, t);
    EXPECT_GE(p.lat, prev.lat);
    EXPECT_GE(p.lon, prev.lon);
    prev = p;
  }
}

std::vector<FrameTime> frames_every(UtcMillis start, UtcMillis step, int n) {
  std::vector<FrameTime> times;
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "f%04d", i);
    times.push_back({id, start + i * step});
  }
  return times;
}

TEST(Subsample, StationaryVehicleKeepsOneFrame) {
  const GpsTrack track({{0, {47.6, -122.3}}, {60'000, {47.6, -122.3}}});
  const auto result = subsample_frames(track, frames_every(0, 1'000, 60),
                                       CivilDate{2021, 6, 5});
  ASSERT_EQ(result.frames.size(), 1u);
  EXPECT_EQ(result.frames[0].frame_id, "f0000");
}

TEST(Subsample, ExactSpacingKeepsEveryFrame) {
  // Eastward on the equator at exactly 4.0 m per second: one frame per
  // second, spacing match is >= so every frame stays.
  const double deg_per_meter = 1.0 / (kEarthRadiusMeters * M_PI / 180.0);
  std::vector<GpsFix> fixes;
  for (int t = 0; t <= 60; ++t) {
    fixes.push_back({t * 1'000, {0.0, 4.0 * t * deg_per_meter}});
  }
  const GpsTrack track(std::move(fixes));
  const auto result = subsample_frames(track, frames_every(0, 1'000, 61),
                                       CivilDate{2021, 6, 5});
  EXPECT_EQ(result.frames.size(), 61u);
}

TEST(Subsample, KilometerTrackMatchesIndependentGreedyWalk) {
  // ~1 km at ~1 m per frame with irregular jitter; the oracle recomputes the
  // greedy walk from the same interpolated positions.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> jitter(0.8, 1.2);
  const double deg_per_meter = 1.0 / (kEarthRadiusMeters * M_PI / 180.0);
  std::vector<GpsFix> fixes;
  double meters = 0.0;
  for (int t = 0; t <= 1'000; t += 10) {
    fixes.push_back({UtcMillis(t) * 1'000, {0.0, meters * deg_per_meter}});
    meters += 10.0 * jitter(rng);
  }
  const GpsTrack track(std::move(fixes));
  const auto frame_times = frames_every(0, 1'000, 1'001);

  const auto result =
      subsample_frames(track, frame_times, CivilDate{2021, 6, 5});

  std::vector<GeoPoint> positions;
  for (const FrameTime& ft : frame_times) {
    positions.push_back(interpolate_position(track, ft.timestamp));
  }
  const auto kept = oracle::greedy_keep(positions, 4.0);
  ASSERT_EQ(result.frames.size(), kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EXPECT_EQ(result.frames[i].frame_id, frame_times[kept[i]].frame_id);
  }
}

TEST(Subsample, FramesOutsideTrackAreCountedNotKept) {
  const GpsTrack track = simple_track();  // spans [0 s, 10 s]
  std::vector<FrameTime> times = {{"a", -5'000}, {"b", 0}, {"c", 15'000}};
  const auto result = subsample_frames(track, times, CivilDate{2021, 6, 5});
  EXPECT_EQ(result.frames.size(), 1u);
  EXPECT_EQ(result.skipped_out_of_range, 2u);
}

TEST(Subsample, EmptyFrameTimesGiveEmptyOutput) {
  const auto result =
      subsample_frames(simple_track(), {}, CivilDate{2021, 6, 5});
  EXPECT_TRUE(result.frames.empty());
  EXPECT_EQ(result.skipped_out_of_range, 0u);
}

TEST(Subsample, GpsGapResetsGreedyWalk) {
  // Stationary vehicle, but a 60 s hole between fixes: the first frame after
  // the gap must be kept despite zero displacement.
  const GpsTrack track({{0, {47.6, -122.3}},
                        {10'000, {47.6, -122.3}},
                        {70'000, {47.6, -122.3}},
                        {80'000, {47.6, -122.3}}});
  std::vector<FrameTime> times = {
      {"before", 2'000}, {"in_gap", 40'000}, {"after", 72'000}};
  SubsampleOptions options;
  options.gap_reset_s = 30.0;
  const auto result =
      subsample_frames(track, times, CivilDate{2021, 6, 5}, options);
  ASSERT_EQ(result.frames.size(), 2u);
  EXPECT_EQ(result.frames[0].frame_id, "before");
  EXPECT_EQ(result.frames[1].frame_id, "in_gap");

  SubsampleOptions no_reset;
  no_reset.gap_reset_s = 0.0;
  const auto result2 =
      subsample_frames(track, times, CivilDate{2021, 6, 5}, no_reset);
  EXPECT_EQ(result2.frames.size(), 1u);
}

TEST(Subsample, PropertiesOnRandomTracks) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> speed(0.0, 10.0);
  const double deg_per_meter = 1.0 / (kEarthRadiusMeters * M_PI / 180.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<GpsFix> fixes;
    double lon_m = 0.0, lat_m = 0.0;
    for (int t = 0; t <= 120; t += 2) {
      fixes.push_back(
          {UtcMillis(t) * 1'000, {lat_m * deg_per_meter, lon_m * deg_per_meter}});
      lon_m += 2.0 * speed(rng);
      lat_m += 2.0 * speed(rng) * 0.3;
    }
    const GpsTrack track(std::move(fixes));
    const auto frame_times = frames_every(0, 500, 241);
    const auto result =
        subsample_frames(track, frame_times, CivilDate{2021, 6, 5});

    // Kept frames form a subsequence of the input and respect spacing (no
    // gaps in these tracks, so the reset never fires).
    std::size_t cursor = 0;
    for (const FrameRecord& frame : result.frames) {
      while (cursor < frame_times.size() &&
             frame_times[cursor].frame_id != frame.frame_id) {
        ++cursor;
      }
      ASSERT_LT(cursor, frame_times.size());
    }
    for (std::size_t i = 1; i < result.frames.size(); ++i) {
      EXPECT_GE(haversine_distance(result.frames[i - 1].position,
                                   result.frames[i].position),
                4.0);
    }
  }
}

TEST(TrackValidation, RejectsShortAndUnsortedTracks) {
  EXPECT_THROW(GpsTrack({{0, {0, 0}}}), ValidationError);
  EXPECT_THROW(GpsTrack({{5'000, {0, 0}}, {1'000, {0, 0.1}}}), ValidationError);
  EXPECT_THROW(GpsTrack({{0, {0, 0}}, {0, {0, 0.1}}}), ValidationError);
  EXPECT_THROW(GpsTrack({{0, {95.0, 0}}, {1'000, {0, 0.1}}}), ValidationError);
}

TEST(TrackIo, LoadsCsvAndAppliesFrameTimeOffset) {
  testing::TempDir dir("geotrack");
  testing::write_file(dir / "gps.csv",
                      "timestamp,lat,lon\n"
                      "2021-06-05T17:00:00Z,47.6000000,-122.3296000\n"
                      "2021-06-05T17:00:05.500Z,47.6000000,-122.3293000\n");
  const GpsTrack track = load_gps_track(dir / "gps.csv");
  ASSERT_EQ(track.fixes().size(), 2u);
  EXPECT_EQ(track.fixes()[1].timestamp - track.fixes()[0].timestamp, 5'500);

  testing::write_file(dir / "frames.csv",
                      "frame_id,timestamp\n"
                      "f1,2021-06-05T17:00:01Z\n"
                      "f2,2021-06-05T17:00:02Z\n");
  const auto plain = load_frame_times(dir / "frames.csv");
  const auto shifted = load_frame_times(dir / "frames.csv", 1.5);
  EXPECT_EQ(shifted[0].timestamp - plain[0].timestamp, 1'500);
}

TEST(TrackIo, ReportsLineNumbersOnBadInput) {
  testing::TempDir dir("geotrack_bad");
  testing::write_file(dir / "gps.csv",
                      "timestamp,lat,lon\n"
                      "2021-06-05T17:00:00Z,47.6,-122.3\n"
                      "not-a-time,47.6,-122.3\n");
  try {
    load_gps_track(dir / "gps.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }

  testing::write_file(dir / "gps2.csv", "time,lat,lon\n");
  EXPECT_THROW(load_gps_track(dir / "gps2.csv"), ParseError);

  testing::write_file(dir / "gps3.csv",
                      "timestamp,lat,lon\n"
                      "2021-06-05T17:00:00Z,91.0,-122.3\n"
                      "2021-06-05T17:00:01Z,47.6,-122.3\n");
  EXPECT_THROW(load_gps_track(dir / "gps3.csv"), ParseError);
}

TEST(Rfc3339, ParsesOffsetsAndFractions) {
  EXPECT_EQ(parse_rfc3339("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(parse_rfc3339("1970-01-01T00:00:00.250Z"), 250);
  EXPECT_EQ(parse_rfc3339("1970-01-01T01:00:00+01:00"), 0);
  EXPECT_EQ(parse_rfc3339("1969-12-31T23:00:00-01:00"), 0);
  EXPECT_EQ(parse_rfc3339("1970-01-01 00:00:00"), 0);
  EXPECT_EQ(format_rfc3339(parse_rfc3339("2021-06-05T17:03:07.089Z")),
            "2021-06-05T17:03:07.089Z");
  EXPECT_THROW(parse_rfc3339("2021-13-05T00:00:00Z"), ParseError);
  EXPECT_THROW(parse_rfc3339("2021-06-05"), ParseError);
  EXPECT_THROW(parse_rfc3339("2021-06-05T25:00:00Z"), ParseError);
}

}  // namespace
}  // namespace svip
