// Generates a small synthetic survey corpus: a straight east-bound drive
// through three census tracts (the middle one holed), with GPS fixes, frame
// timestamps, equirectangular frames, region geometry, tract attributes and
// a ready-to-run pipeline configuration. Everything is deterministic, so
// repeated invocations produce identical inputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "svip/csv.hpp"
#include "svip/image.hpp"
#include "svip/timestamp.hpp"

namespace fs = std::filesystem;

namespace {

constexpr double kLat = 47.6000;
constexpr double kLonStart = -122.3296;
constexpr double kLonPerSecond = 6.8333e-5;  // ~5.1 m/s eastbound

double lon_at(double seconds) { return kLonStart + kLonPerSecond * seconds; }

std::string timestamp_at(svip::UtcMillis t0, double seconds) {
  return svip::format_rfc3339(t0 + svip::UtcMillis(std::llround(seconds * 1000.0)));
}

void write_gps(const fs::path& path, svip::UtcMillis t0) {
  std::string csv = "timestamp,lat,lon\n";
  // Fixes every 5 s with a 35 s dropout between 60 s and 95 s.
  for (int t = 0; t <= 120; t += 5) {
    if (t > 60 && t < 95) continue;
    csv += timestamp_at(t0, t) + "," + svip::format_fixed(kLat, 7) + "," +
           svip::format_fixed(lon_at(t), 7) + "\n";
  }
  svip::atomic_write_file(path, csv);
}

const std::vector<std::pair<const char*, double>>& frame_plan() {
  // Two frames outside the track span, a slow-speed burst that the 4 m rule
  // drops, and a pair straddling the GPS gap so the reset path is exercised.
  static const std::vector<std::pair<const char*, double>> plan = {
      {"f01", -3.0}, {"f02", 0.0},  {"f03", 6.0},   {"f04", 6.3},
      {"f05", 6.6},  {"f06", 12.0}, {"f07", 18.0},  {"f08", 24.0},
      {"f09", 30.0}, {"f10", 36.0}, {"f11", 42.0},  {"f12", 48.0},
      {"f13", 48.4}, {"f14", 54.0}, {"f15", 94.8},  {"f16", 95.2},
      {"f17", 102.0}, {"f18", 108.0}, {"f19", 114.0}, {"f20", 126.0},
  };
  return plan;
}

void write_frame_times(const fs::path& path, svip::UtcMillis t0) {
  std::string csv = "frame_id,timestamp\n";
  for (const auto& [id, t] : frame_plan()) {
    csv += std::string(id) + "," + timestamp_at(t0, t) + "\n";
  }
  svip::atomic_write_file(path, csv);
}

nlohmann::json rect_ring(double lon0, double lat0, double lon1, double lat1) {
  return nlohmann::json::array({
      {lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1}, {lon0, lat0},
  });
}

void write_regions(const fs::path& path) {
  nlohmann::json fc;
  fc["type"] = "FeatureCollection";
  auto features = nlohmann::json::array();

  const auto feature = [](const std::string& geoid, nlohmann::json rings) {
    nlohmann::json f;
    f["type"] = "Feature";
    f["properties"] = {{"GEOID", geoid}};
    f["geometry"] = {{"type", "Polygon"}, {"coordinates", std::move(rings)}};
    return f;
  };

  features.push_back(feature(
      "53033000100",
      nlohmann::json::array({rect_ring(-122.3300, 47.5990, -122.3270, 47.6010)})));
  // The middle tract has a hole the route drives through.
  features.push_back(feature(
      "53033000200",
      nlohmann::json::array({rect_ring(-122.3270, 47.5990, -122.3240, 47.6010),
                             rect_ring(-122.3262, 47.5998, -122.3258, 47.6002)})));
  features.push_back(feature(
      "53033000300",
      nlohmann::json::array({rect_ring(-122.3240, 47.5990, -122.3210, 47.6010)})));

  fc["features"] = std::move(features);
  svip::atomic_write_file(path, fc.dump(2) + "\n");
}

void write_attributes(const fs::path& path) {
  svip::atomic_write_file(path,
                          "geoid,median_income,pct_white\n"
                          "53033000100,45000,0.35\n"
                          "53033000200,85000,0.62\n"
                          "53033000300,125000,0.78\n");
}

void write_frames(const fs::path& dir, int index_salt) {
  fs::create_directories(dir);
  const int w = 256, h = 128;
  for (std::size_t i = 0; i < frame_plan().size(); ++i) {
    svip::Image img(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        img.at(x, y, 0) = std::uint8_t((x * 255) / (w - 1));
        img.at(x, y, 1) = std::uint8_t((y * 255) / (h - 1));
        img.at(x, y, 2) = std::uint8_t((37 * (i + 1 + index_salt) + x / 8 * 16) & 0xFF);
      }
    }
    // Bright stripe at lon = +90 degrees, the right view's principal ray.
    const int stripe = (3 * w) / 4;
    for (int y = 0; y < h; ++y) {
      img.at(stripe, y, 0) = 255;
      img.at(stripe, y, 1) = 255;
      img.at(stripe, y, 2) = 255;
    }
    svip::save_image(img, dir / (std::string(frame_plan()[i].first) + ".png"));
  }
}

void write_config(const fs::path& path, std::uint64_t salt,
                  const std::string& geometry, const std::string& attributes) {
  std::string cfg;
  cfg += "frames_dir = frames\n";
  cfg += "gps_file = gps.csv\n";
  cfg += "frame_times_file = frame_times.csv\n";
  cfg += "geometry_file = " + geometry + "\n";
  cfg += "attributes_file = " + attributes + "\n";
  cfg += "output_dir = out\n";
  cfg += "spacing_m = 4.0\n";
  cfg += "gap_reset_s = 30.0\n";
  cfg += "view.out_width = 512\n";
  cfg += "view.out_height = 342\n";
  cfg += "confidence_threshold = 0.80\n";
  cfg += "stub.count_min = 0\n";
  cfg += "stub.count_max = 3\n";
  cfg += "stub.seed_salt = " + std::to_string(salt) + "\n";
  cfg += "grid_cells = 16\n";
  svip::atomic_write_file(path, cfg);
}

void write_survey(const fs::path& dir, svip::UtcMillis t0, std::uint64_t salt,
                  int index_salt, const std::string& geometry,
                  const std::string& attributes) {
  fs::create_directories(dir);
  write_gps(dir / "gps.csv", t0);
  write_frame_times(dir / "frame_times.csv", t0);
  write_frames(dir / "frames", index_salt);
  write_config(dir / "config.toml", salt, geometry, attributes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate a synthetic street-survey fixture"};
  std::string dir;
  int surveys = 1;
  std::uint64_t salt = 42;
  app.add_option("dir", dir, "target directory")->required();
  app.add_option("--surveys", surveys, "number of survey dates (default 1)");
  app.add_option("--salt", salt, "stub detector seed salt (default 42)");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(dir);
    const fs::path root(dir);

    if (surveys <= 1) {
      write_regions(root / "regions.geojson");
      write_attributes(root / "attributes.csv");
      // 2021-06-05 17:00 UTC, a Saturday after vaccine availability.
      write_survey(root, svip::parse_rfc3339("2021-06-05T17:00:00Z"), salt, 0,
                   "regions.geojson", "attributes.csv");
      std::cerr << "fixture written to " << root.string() << "\n";
      return 0;
    }

    write_regions(root / "regions.geojson");
    write_attributes(root / "attributes.csv");
    // Survey dates step 45 days from 2020-05-13 to cycle seasons, weekdays
    // and the vaccine cutover.
    const svip::UtcMillis base = svip::parse_rfc3339("2020-05-13T17:00:00Z");
    std::string reference = "date,value\n";
    for (int s = 0; s < surveys; ++s) {
      const svip::UtcMillis t0 = base + svip::UtcMillis(s) * 45 * 86400 * 1000;
      char name[8];
      std::snprintf(name, sizeof(name), "s%02d", s + 1);
      write_survey(root / name, t0, salt + std::uint64_t(s), s,
                   "../regions.geojson", "../attributes.csv");
      reference += svip::format_date(svip::civil_from_millis(t0)) + "," +
                   svip::format_fixed(100.0 + 3.0 * s + (s % 3) * 5.0, 2) + "\n";
    }
    svip::atomic_write_file(root / "reference.csv", reference);
    std::cerr << surveys << " surveys written to " << root.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
