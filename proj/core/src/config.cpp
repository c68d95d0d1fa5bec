#include "svip/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "svip/error.hpp"

namespace svip {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": bad number \"" + value + "\"");
  }
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": bad integer \"" + value + "\"");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

}  // namespace

ViewSpec ViewConfig::spec(Side side) const {
  ViewSpec s;
  s.side = side;
  s.yaw_offset_deg = side == Side::Left ? left_yaw_deg : right_yaw_deg;
  s.hfov_deg = hfov_deg;
  s.vfov_deg = vfov_deg;
  s.pitch_deg = pitch_deg;
  s.out_width = out_width;
  s.out_height = out_height;
  return s;
}

PipelineConfig parse_config_text(const std::string& text,
                                 const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value, got \"" + line + "\"");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));

    if (key == "frames_dir") {
      cfg.frames_dir = resolve(base_dir, value);
    } else if (key == "gps_file") {
      cfg.gps_file = resolve(base_dir, value);
    } else if (key == "frame_times_file") {
      cfg.frame_times_file = resolve(base_dir, value);
    } else if (key == "geometry_file") {
      cfg.geometry_file = resolve(base_dir, value);
    } else if (key == "attributes_file") {
      cfg.attributes_file = resolve(base_dir, value);
    } else if (key == "detections_file") {
      cfg.detections_file = resolve(base_dir, value);
    } else if (key == "detector_command") {
      cfg.detector_command = value;
    } else if (key == "reference_series_file") {
      cfg.reference_series_file = resolve(base_dir, value);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(base_dir, value);
    } else if (key == "spacing_m") {
      cfg.spacing_m = to_double(key, value);
    } else if (key == "gap_reset_s") {
      cfg.gap_reset_s = to_double(key, value);
    } else if (key == "time_offset_s") {
      cfg.time_offset_s = to_double(key, value);
    } else if (key == "survey_date") {
      cfg.survey_date =
          value.empty() ? std::nullopt : std::optional(parse_date(value));
    } else if (key == "view_format") {
      if (value != "png" && value != "jpg") {
        throw ConfigError("view_format must be png or jpg, got \"" + value + "\"");
      }
      cfg.view_format = value;
    } else if (key == "view.hfov_deg") {
      cfg.view.hfov_deg = to_double(key, value);
    } else if (key == "view.vfov_deg") {
      cfg.view.vfov_deg = to_double(key, value);
    } else if (key == "view.pitch_deg") {
      cfg.view.pitch_deg = to_double(key, value);
    } else if (key == "view.left_yaw_deg") {
      cfg.view.left_yaw_deg = to_double(key, value);
    } else if (key == "view.right_yaw_deg") {
      cfg.view.right_yaw_deg = to_double(key, value);
    } else if (key == "view.out_width") {
      cfg.view.out_width = int(to_int(key, value));
    } else if (key == "view.out_height") {
      cfg.view.out_height = int(to_int(key, value));
    } else if (key == "confidence_threshold") {
      cfg.confidence_threshold = to_double(key, value);
    } else if (key == "pedestrian_class_index") {
      cfg.pedestrian_class_index = int(to_int(key, value));
    } else if (key == "stub.count_min") {
      cfg.stub.count_min = int(to_int(key, value));
    } else if (key == "stub.count_max") {
      cfg.stub.count_max = int(to_int(key, value));
    } else if (key == "stub.classes") {
      cfg.stub.classes = int(to_int(key, value));
    } else if (key == "stub.seed_salt") {
      cfg.stub.seed_salt = std::uint64_t(to_int(key, value));
    } else if (key == "grid_cells") {
      cfg.grid_cells = int(to_int(key, value));
    } else if (key == "image_unit") {
      cfg.image_unit = image_unit_from_string(value);
    } else if (key == "excluded_dates") {
      cfg.excluded_dates.clear();
      for (const std::string& d : split_list(value)) {
        cfg.excluded_dates.push_back(parse_date(d));
      }
    } else if (key == "encoding.vaccine_date") {
      cfg.encoding.vaccine_date = parse_date(value);
    } else if (key == "encoding.income_thresholds") {
      cfg.encoding.income_thresholds.clear();
      if (value != "quintiles") {
        for (const std::string& t : split_list(value)) {
          cfg.encoding.income_thresholds.push_back(to_double(key, t));
        }
        if (cfg.encoding.income_thresholds.size() != 4) {
          throw ConfigError(
              "encoding.income_thresholds needs \"quintiles\" or 4 cut "
              "points, got " +
              std::to_string(cfg.encoding.income_thresholds.size()));
        }
      }
    } else if (key == "encoding.white_threshold") {
      cfg.encoding.white_threshold = to_double(key, value);
    } else if (key == "jobs") {
      cfg.jobs = int(to_int(key, value));
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

namespace {

void print_processing_keys(std::ostream& out, const PipelineConfig& cfg) {
  out << "spacing_m = " << cfg.spacing_m << "\n";
  out << "gap_reset_s = " << cfg.gap_reset_s << "\n";
  out << "time_offset_s = " << cfg.time_offset_s << "\n";
  out << "survey_date = "
      << (cfg.survey_date ? format_date(*cfg.survey_date) : "") << "\n";
  out << "view_format = " << cfg.view_format << "\n";
  out << "view.hfov_deg = " << cfg.view.hfov_deg << "\n";
  out << "view.vfov_deg = " << cfg.view.vfov_deg << "\n";
  out << "view.pitch_deg = " << cfg.view.pitch_deg << "\n";
  out << "view.left_yaw_deg = " << cfg.view.left_yaw_deg << "\n";
  out << "view.right_yaw_deg = " << cfg.view.right_yaw_deg << "\n";
  out << "view.out_width = " << cfg.view.out_width << "\n";
  out << "view.out_height = " << cfg.view.out_height << "\n";
  out << "confidence_threshold = " << cfg.confidence_threshold << "\n";
  out << "pedestrian_class_index = " << cfg.pedestrian_class_index << "\n";
  out << "stub.count_min = " << cfg.stub.count_min << "\n";
  out << "stub.count_max = " << cfg.stub.count_max << "\n";
  out << "stub.classes = " << cfg.stub.classes << "\n";
  out << "stub.seed_salt = " << cfg.stub.seed_salt << "\n";
  out << "grid_cells = " << cfg.grid_cells << "\n";
  out << "image_unit = " << to_string(cfg.image_unit) << "\n";
  out << "excluded_dates = ";
  for (std::size_t i = 0; i < cfg.excluded_dates.size(); ++i) {
    if (i) out << ",";
    out << format_date(cfg.excluded_dates[i]);
  }
  out << "\n";
  out << "encoding.vaccine_date = " << format_date(cfg.encoding.vaccine_date)
      << "\n";
  out << "encoding.income_thresholds = ";
  if (cfg.encoding.income_thresholds.empty()) {
    out << "quintiles";
  } else {
    for (std::size_t i = 0; i < cfg.encoding.income_thresholds.size(); ++i) {
      if (i) out << ",";
      out << cfg.encoding.income_thresholds[i];
    }
  }
  out << "\n";
  out << "encoding.white_threshold = " << cfg.encoding.white_threshold << "\n";
}

}  // namespace

std::string print_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out.precision(15);
  out << "frames_dir = " << cfg.frames_dir.string() << "\n";
  out << "gps_file = " << cfg.gps_file.string() << "\n";
  out << "frame_times_file = " << cfg.frame_times_file.string() << "\n";
  out << "geometry_file = " << cfg.geometry_file.string() << "\n";
  out << "attributes_file = " << cfg.attributes_file.string() << "\n";
  out << "detections_file = " << cfg.detections_file.string() << "\n";
  out << "detector_command = " << cfg.detector_command << "\n";
  out << "reference_series_file = " << cfg.reference_series_file.string()
      << "\n";
  out << "output_dir = " << cfg.output_dir.string() << "\n";
  print_processing_keys(out, cfg);
  out << "jobs = " << cfg.jobs << "\n";
  return out.str();
}

void validate_config(const PipelineConfig& cfg, bool check_paths) {
  if (!(cfg.confidence_threshold >= 0.0 && cfg.confidence_threshold <= 1.0)) {
    throw ConfigError("confidence_threshold must be in [0, 1], got " +
                      std::to_string(cfg.confidence_threshold));
  }
  if (cfg.spacing_m <= 0.0) {
    throw ConfigError("spacing_m must be > 0");
  }
  if (cfg.jobs < 1) {
    throw ConfigError("jobs must be >= 1");
  }
  if (cfg.grid_cells < 1) {
    throw ConfigError("grid_cells must be >= 1");
  }
  if (cfg.stub.count_min < 0 || cfg.stub.count_max < cfg.stub.count_min) {
    throw ConfigError("stub count range invalid");
  }
  if (cfg.stub.classes < 2) {
    throw ConfigError("stub.classes must be >= 2");
  }
  if (!(cfg.encoding.white_threshold >= 0.0 &&
        cfg.encoding.white_threshold <= 1.0)) {
    throw ConfigError("encoding.white_threshold must be in [0, 1]");
  }
  cfg.view.spec(Side::Left).validate();
  cfg.view.spec(Side::Right).validate();
  if (!cfg.detector_command.empty() && !cfg.detections_file.empty()) {
    throw ConfigError(
        "detector_command and detections_file are mutually exclusive");
  }

  if (check_paths) {
    const auto require = [](const std::filesystem::path& p, const char* key) {
      if (p.empty()) {
        throw ConfigError(std::string("config key ") + key + " is required");
      }
      if (!std::filesystem::exists(p)) {
        throw ConfigError(std::string(key) + " does not exist: " + p.string());
      }
    };
    require(cfg.frames_dir, "frames_dir");
    require(cfg.gps_file, "gps_file");
    require(cfg.frame_times_file, "frame_times_file");
    require(cfg.geometry_file, "geometry_file");
    if (!cfg.detections_file.empty()) {
      require(cfg.detections_file, "detections_file");
    }
  }
}

std::string config_digest(const PipelineConfig& cfg) {
  // Only processing parameters enter the digest: input locations and the
  // parallelism degree do not change what the pipeline computes.
  std::ostringstream out;
  out.precision(15);
  print_processing_keys(out, cfg);
  const std::string text = out.str();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace svip
