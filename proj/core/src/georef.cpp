#include "svip/georef.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "svip/error.hpp"

namespace svip {

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords, std::size_t feature_idx) {
  const std::string where = "feature " + std::to_string(feature_idx);
  if (!coords.is_array() || coords.size() < 4) {
    throw ParseError(where + ": ring needs >= 3 vertices plus the closing one");
  }
  Ring ring;
  ring.vertices.reserve(coords.size());
  for (const auto& v : coords) {
    if (!v.is_array() || v.size() < 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ParseError(where + ": ring vertex must be [lon, lat]");
    }
    ring.vertices.push_back(GeoPoint{v[1].get<double>(), v[0].get<double>()});
  }
  const GeoPoint& first = ring.vertices.front();
  const GeoPoint& last = ring.vertices.back();
  if (first.lat != last.lat || first.lon != last.lon) {
    throw ParseError(where + ": ring is not closed (first vertex != last)");
  }
  return ring;
}

void grow_bbox(GeoBBox& box, const Ring& ring) {
  for (const GeoPoint& p : ring.vertices) {
    box.min_lon = std::min(box.min_lon, p.lon);
    box.max_lon = std::max(box.max_lon, p.lon);
    box.min_lat = std::min(box.min_lat, p.lat);
    box.max_lat = std::max(box.max_lat, p.lat);
  }
}

}  // namespace

std::vector<Region> load_regions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError(path.string() + ": invalid JSON");
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw ParseError(path.string() + ": expected a GeoJSON FeatureCollection");
  }

  std::vector<Region> regions;
  std::unordered_set<std::string> seen;
  std::size_t idx = 0;
  for (const auto& feature : doc["features"]) {
    const std::string where = path.string() + " feature " + std::to_string(idx);
    if (!feature.contains("properties") || !feature["properties"].is_object() ||
        !feature["properties"].contains("GEOID")) {
      throw ParseError(where + ": missing GEOID property");
    }
    Region region;
    const auto& geoid = feature["properties"]["GEOID"];
    if (geoid.is_string()) {
      region.geoid = geoid.get<std::string>();
    } else if (geoid.is_number_integer()) {
      region.geoid = std::to_string(geoid.get<std::int64_t>());
    } else {
      throw ParseError(where + ": GEOID must be a string or integer");
    }
    if (region.geoid == kUnmatchedGeoid) {
      throw ParseError(where + ": GEOID \"" + kUnmatchedGeoid +
                       "\" collides with the sentinel value");
    }
    if (!seen.insert(region.geoid).second) {
      throw ParseError(where + ": duplicate GEOID \"" + region.geoid + "\"");
    }

    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw ParseError(where + ": missing geometry");
    }
    const auto& geometry = feature["geometry"];
    const std::string type = geometry.value("type", "");
    const auto& coords = geometry["coordinates"];
    try {
      if (type == "Polygon") {
        for (const auto& ring : coords) {
          region.rings.push_back(parse_ring(ring, idx));
        }
      } else if (type == "MultiPolygon") {
        for (const auto& polygon : coords) {
          for (const auto& ring : polygon) {
            region.rings.push_back(parse_ring(ring, idx));
          }
        }
      } else {
        throw ParseError("unsupported geometry type \"" + type + "\"");
      }
    } catch (const ParseError& e) {
      throw ParseError(path.string() + " " + e.what());
    }
    if (region.rings.empty()) {
      throw ParseError(where + ": geometry has no rings");
    }

    region.bbox = GeoBBox{std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::lowest(),
                          std::numeric_limits<double>::lowest()};
    for (const Ring& ring : region.rings) grow_bbox(region.bbox, ring);
    regions.push_back(std::move(region));
    ++idx;
  }
  return regions;
}

bool point_in_region(const GeoPoint& p, const Region& r) {
  bool inside = false;
  for (const Ring& ring : r.rings) {
    const auto& v = ring.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const GeoPoint& a = v[i];
      const GeoPoint& b = v[i + 1];
      if ((a.lat > p.lat) != (b.lat > p.lat)) {
        const double x_cross =
            a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
        if (p.lon < x_cross) inside = !inside;
      }
    }
  }
  return inside;
}

RegionIndex::RegionIndex(std::vector<Region> regions, int grid_cells)
    : regions_(std::move(regions)) {
  if (grid_cells < 1) {
    throw ValidationError("grid cell count must be >= 1, got " +
                          std::to_string(grid_cells));
  }
  cells_ = grid_cells;
  grid_.assign(std::size_t(cells_) * cells_, {});
  if (regions_.empty()) return;

  extent_ = regions_.front().bbox;
  for (const Region& r : regions_) {
    extent_.min_lon = std::min(extent_.min_lon, r.bbox.min_lon);
    extent_.max_lon = std::max(extent_.max_lon, r.bbox.max_lon);
    extent_.min_lat = std::min(extent_.min_lat, r.bbox.min_lat);
    extent_.max_lat = std::max(extent_.max_lat, r.bbox.max_lat);
  }
  cell_w_ = (extent_.max_lon - extent_.min_lon) / cells_;
  cell_h_ = (extent_.max_lat - extent_.min_lat) / cells_;
  if (cell_w_ <= 0.0) cell_w_ = 1.0;
  if (cell_h_ <= 0.0) cell_h_ = 1.0;

  for (std::uint32_t i = 0; i < regions_.size(); ++i) {
    const GeoBBox& b = regions_[i].bbox;
    const auto [cx0, cy0] = cell_of(b.min_lon, b.min_lat);
    const auto [cx1, cy1] = cell_of(b.max_lon, b.max_lat);
    for (int cy = cy0; cy <= cy1; ++cy) {
      for (int cx = cx0; cx <= cx1; ++cx) {
        grid_[std::size_t(cy) * cells_ + cx].push_back(i);
      }
    }
  }
}

std::pair<int, int> RegionIndex::cell_of(double lon, double lat) const {
  int cx = int((lon - extent_.min_lon) / cell_w_);
  int cy = int((lat - extent_.min_lat) / cell_h_);
  cx = std::clamp(cx, 0, cells_ - 1);
  cy = std::clamp(cy, 0, cells_ - 1);
  return {cx, cy};
}

const std::string& RegionIndex::match(const GeoPoint& p) const {
  if (regions_.empty() || !extent_.contains(p)) return kUnmatchedGeoid;
  const auto [cx, cy] = cell_of(p.lon, p.lat);
  for (std::uint32_t i : grid_[std::size_t(cy) * cells_ + cx]) {
    const Region& r = regions_[i];
    if (r.bbox.contains(p) && point_in_region(p, r)) return r.geoid;
  }
  return kUnmatchedGeoid;
}

GeocodeResult geocode_detections(
    const std::vector<Detection>& detections,
    const std::unordered_map<std::string, FrameRecord>& frames,
    const RegionIndex& index) {
  GeocodeResult result;
  result.records.reserve(detections.size());
  for (const Detection& det : detections) {
    const auto it = frames.find(det.frame_id);
    if (it == frames.end()) {
      throw Error("detection references unknown frame_id \"" + det.frame_id +
                  "\"; detections and frames are out of sync");
    }
    const FrameRecord& frame = it->second;
    GeoCodedDetection rec;
    rec.detection = det;
    rec.position = frame.position;
    rec.geoid = index.match(frame.position);
    rec.survey_date = frame.survey_date;
    if (rec.geoid == kUnmatchedGeoid) ++result.unmatched;
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace svip
