#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "svip/detect.hpp"
#include "svip/geotrack.hpp"

namespace svip {

/// Sentinel GEOID for positions no loaded region contains.
inline const std::string kUnmatchedGeoid = "unmatched";

struct GeoBBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat &&
           p.lat <= max_lat;
  }
};

/// One closed ring of lon/lat vertices (first == last).
struct Ring {
  std::vector<GeoPoint> vertices;
};

/// A geographic region: all rings of its (multi)polygon, holes included.
/// Containment is even-odd over every ring, so holes subtract naturally.
struct Region {
  std::string geoid;
  std::vector<Ring> rings;
  GeoBBox bbox;
};

/// Loads a GeoJSON FeatureCollection of Polygon/MultiPolygon features, each
/// carrying a GEOID property. Duplicate GEOIDs, unclosed rings and
/// unsupported geometry types are rejected with the feature index.
std::vector<Region> load_regions(const std::filesystem::path& path);

/// Even-odd ray casting over all rings. Points on a shared edge resolve by
/// the half-open edge rule, so every boundary point belongs to exactly one
/// of two adjacent regions.
bool point_in_region(const GeoPoint& p, const Region& r);

/// Uniform-grid index over region bounding boxes. Queries return the first
/// containing region in load order; the grid prefilter returns a superset
/// of candidates and never misses one.
class RegionIndex {
 public:
  explicit RegionIndex(std::vector<Region> regions, int grid_cells = 64);

  const std::vector<Region>& regions() const { return regions_; }

  /// The containing region's GEOID, or kUnmatchedGeoid.
  const std::string& match(const GeoPoint& p) const;

 private:
  std::vector<Region> regions_;
  GeoBBox extent_;
  int cells_ = 0;
  double cell_w_ = 0.0;
  double cell_h_ = 0.0;
  std::vector<std::vector<std::uint32_t>> grid_;

  std::pair<int, int> cell_of(double lon, double lat) const;
};

inline std::string match_geoid(const GeoPoint& p, const RegionIndex& index) {
  return index.match(p);
}

/// A detection stamped with its frame's position and region.
struct GeoCodedDetection {
  Detection detection;
  GeoPoint position;
  std::string geoid;
  CivilDate survey_date;
};

struct GeocodeResult {
  std::vector<GeoCodedDetection> records;
  std::size_t unmatched = 0;
};

/// Stamps each detection with its frame's interpolated position (detections
/// inherit the camera position) and matched GEOID. An unknown frame_id is a
/// pipeline wiring bug and throws.
GeocodeResult geocode_detections(
    const std::vector<Detection>& detections,
    const std::unordered_map<std::string, FrameRecord>& frames,
    const RegionIndex& index);

}  // namespace svip
