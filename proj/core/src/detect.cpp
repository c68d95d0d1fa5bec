#include "svip/detect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "svip/csv.hpp"
#include "svip/error.hpp"

namespace svip {

namespace {

// Portable deterministic hash/PRNG pair (FNV-1a seed, splitmix64 stream);
// std::hash would not reproduce across standard libraries.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint64_t stub_seed(const std::string& frame_id, Side side,
                        std::uint64_t salt) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  h = fnv1a(frame_id.data(), frame_id.size(), h);
  const char sep = 0x1F;
  h = fnv1a(&sep, 1, h);
  const char s = side_letter(side);
  h = fnv1a(&s, 1, h);
  h = fnv1a(&sep, 1, h);
  unsigned char salt_bytes[8];
  for (int i = 0; i < 8; ++i) salt_bytes[i] = (salt >> (8 * i)) & 0xFF;
  h = fnv1a(salt_bytes, 8, h);
  return h;
}

[[noreturn]] void line_error(const std::filesystem::path& path,
                             std::size_t line, const std::string& message) {
  throw ParseError(path.string() + " line " + std::to_string(line) + ": " +
                   message);
}

}  // namespace

void validate_softmax(const std::vector<double>& probs) {
  if (probs.size() < 2) {
    throw ValidationError("softmax vector needs >= 2 classes, got " +
                          std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("softmax entry " + std::to_string(p) +
                            " outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("softmax probabilities sum to " +
                          std::to_string(sum) + ", expected 1 within 1e-6");
  }
}

std::size_t pedestrian_index(int configured, std::size_t n_classes) {
  if (configured < 0) return n_classes - 1;
  if (std::size_t(configured) >= n_classes) {
    throw ValidationError("pedestrian class index " +
                          std::to_string(configured) + " out of range for " +
                          std::to_string(n_classes) + " classes");
  }
  return std::size_t(configured);
}

std::vector<Detection> stub_detect(const std::string& frame_id, Side side,
                                   int view_width, int view_height,
                                   const StubDetectorOptions& options) {
  if (options.count_min < 0 || options.count_max < options.count_min) {
    throw ValidationError("stub detector count range invalid: [" +
                          std::to_string(options.count_min) + ", " +
                          std::to_string(options.count_max) + "]");
  }
  if (options.classes < 2) {
    throw ValidationError("stub detector needs >= 2 classes");
  }
  SplitMix64 rng(stub_seed(frame_id, side, options.seed_salt));
  const int span = options.count_max - options.count_min + 1;
  const int count = options.count_min + int(rng.uniform01() * span);

  const std::size_t ped =
      pedestrian_index(options.pedestrian_class_index, options.classes);
  std::vector<Detection> dets;
  dets.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double cx = rng.uniform01() * view_width;
    const double cy = rng.uniform01() * view_height;
    double w = 8.0 + rng.uniform01() * (view_width / 4.0);
    double h = 16.0 + rng.uniform01() * (view_height / 3.0);
    w = std::min(w, double(view_width));
    h = std::min(h, double(view_height));
    const double x = std::clamp(cx - w / 2.0, 0.0, view_width - w);
    const double y = std::clamp(cy - h / 2.0, 0.0, view_height - h);
    const double p = rng.uniform01();

    Detection d;
    d.frame_id = frame_id;
    d.side = side;
    d.box = BoundingBox{x, y, w, h};
    d.scores.assign(options.classes, (1.0 - p) / (options.classes - 1));
    d.scores[ped] = p;
    d.confidence = p;
    dets.push_back(std::move(d));
  }
  return dets;
}

std::vector<Detection> ingest_detections(const std::filesystem::path& path,
                                         int pedestrian_class_index) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::vector<Detection> dets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      line_error(path, line_no, "invalid JSON object");
    }
    Detection d;
    if (!j.contains("frame_id") || !j["frame_id"].is_string()) {
      line_error(path, line_no, "missing or non-string field \"frame_id\"");
    }
    d.frame_id = j["frame_id"].get<std::string>();
    if (!j.contains("side") || !j["side"].is_string()) {
      line_error(path, line_no, "missing or non-string field \"side\"");
    }
    try {
      d.side = side_from_string(j["side"].get<std::string>());
    } catch (const ParseError& e) {
      line_error(path, line_no, e.what());
    }
    if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4) {
      line_error(path, line_no, "field \"bbox\" must be an array of 4 numbers");
    }
    for (int k = 0; k < 4; ++k) {
      if (!j["bbox"][k].is_number()) {
        line_error(path, line_no, "field \"bbox\" must be an array of 4 numbers");
      }
    }
    d.box = BoundingBox{j["bbox"][0].get<double>(), j["bbox"][1].get<double>(),
                        j["bbox"][2].get<double>(), j["bbox"][3].get<double>()};
    if (!(d.box.w > 0.0) || !(d.box.h > 0.0)) {
      line_error(path, line_no, "bounding box must have positive width and height");
    }
    if (!j.contains("scores") || !j["scores"].is_array()) {
      line_error(path, line_no, "missing or non-array field \"scores\"");
    }
    for (const auto& v : j["scores"]) {
      if (!v.is_number()) {
        line_error(path, line_no, "field \"scores\" must contain numbers");
      }
      d.scores.push_back(v.get<double>());
    }
    try {
      validate_softmax(d.scores);
      d.confidence =
          d.scores[pedestrian_index(pedestrian_class_index, d.scores.size())];
    } catch (const ValidationError& e) {
      line_error(path, line_no, e.what());
    }
    dets.push_back(std::move(d));
  }
  return dets;
}

std::string detections_to_jsonl(const std::vector<Detection>& detections) {
  std::string out;
  for (const Detection& d : detections) {
    nlohmann::json j;
    j["frame_id"] = d.frame_id;
    j["side"] = std::string(1, side_letter(d.side));
    j["bbox"] = {d.box.x, d.box.y, d.box.w, d.box.h};
    j["scores"] = d.scores;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_detections(const std::vector<Detection>& detections,
                      const std::filesystem::path& path) {
  atomic_write_file(path, detections_to_jsonl(detections));
}

std::vector<Detection> filter_by_confidence(const std::vector<Detection>& dets,
                                            double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("confidence threshold must be in [0, 1], got " +
                          std::to_string(threshold));
  }
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    if (d.confidence >= threshold) kept.push_back(d);
  }
  return kept;
}

}  // namespace svip
