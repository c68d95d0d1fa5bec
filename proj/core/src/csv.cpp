#include "svip/csv.hpp"

#include <cstdio>
#include <system_error>

#include "svip/error.hpp"

namespace svip {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

CsvReader::CsvReader(const std::filesystem::path& path,
                     const std::string& expected_header)
    : path_(path), in_(path) {
  if (!in_) {
    throw ParseError("cannot open " + path.string());
  }
  std::string header;
  if (!std::getline(in_, header)) {
    throw ParseError(path.string() + ": empty file, expected header \"" +
                     expected_header + "\"");
  }
  header = strip_cr(header);
  if (header != expected_header) {
    throw ParseError(path.string() + ": bad header \"" + header +
                     "\", expected \"" + expected_header + "\"");
  }
  n_fields_ = split_csv_line(expected_header).size();
  line_ = 1;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    line = strip_cr(line);
    if (line.empty()) continue;
    fields = split_csv_line(line);
    if (fields.size() != n_fields_) {
      throw ParseError(path_.string() + " line " + std::to_string(line_) +
                       ": expected " + std::to_string(n_fields_) +
                       " fields, got " + std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

}  // namespace svip
