#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svip/orthorect.hpp"

namespace svip {

/// Pixel-space box, top-left anchored.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

/// One pedestrian detection in one rectilinear view. `scores` is the
/// classifier's softmax vector; `confidence` is its pedestrian-class entry.
struct Detection {
  std::string frame_id;
  Side side = Side::Left;
  BoundingBox box;
  std::vector<double> scores;
  double confidence = 0.0;
};

/// Throws ValidationError unless probs has >= 2 entries, each in [0, 1],
/// summing to 1 within 1e-6.
void validate_softmax(const std::vector<double>& probs);

/// Resolves the configured pedestrian class index (-1 means last entry).
std::size_t pedestrian_index(int configured, std::size_t n_classes);

/// The detector boundary. The real CNN runs out of process; in-tree
/// implementations are the deterministic stub below.
class DetectorPlugin {
 public:
  virtual ~DetectorPlugin() = default;
  virtual std::vector<Detection> detect(const RectilinearView& view) const = 0;
};

struct StubDetectorOptions {
  int count_min = 0;
  int count_max = 3;
  int classes = 2;
  int pedestrian_class_index = -1;  // -1 = last
  std::uint64_t seed_salt = 0;
};

/// Deterministic pseudo-random detections derived solely from
/// (frame_id, side, seed_salt). Pixel content never matters, so results are
/// reproducible across runs, machines and schedules.
std::vector<Detection> stub_detect(const std::string& frame_id, Side side,
                                   int view_width, int view_height,
                                   const StubDetectorOptions& options);

class StubDetector : public DetectorPlugin {
 public:
  explicit StubDetector(StubDetectorOptions options) : options_(options) {}
  std::vector<Detection> detect(const RectilinearView& view) const override {
    return stub_detect(view.frame_id, view.side, view.image.width(),
                       view.image.height(), options_);
  }

 private:
  StubDetectorOptions options_;
};

/// Reads the JSON-lines interchange format:
///   {"frame_id": str, "side": "L"|"R", "bbox": [x,y,w,h], "scores": [...]}
/// Malformed lines are rejected with their line number. Confidence is
/// extracted from scores at the pedestrian class index.
std::vector<Detection> ingest_detections(const std::filesystem::path& path,
                                         int pedestrian_class_index = -1);

/// Serializes detections to the interchange format, atomically.
void write_detections(const std::vector<Detection>& detections,
                      const std::filesystem::path& path);

std::string detections_to_jsonl(const std::vector<Detection>& detections);

/// Keeps detections with confidence >= threshold (detections strictly below
/// the cut are discarded). Preserves order.
std::vector<Detection> filter_by_confidence(const std::vector<Detection>& dets,
                                            double threshold = 0.80);

}  // namespace svip
