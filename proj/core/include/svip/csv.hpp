#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace svip {

/// Line-oriented reader for the pipeline's simple comma-separated files
/// (UTF-8, LF, no quoting). Verifies the header on open and reports
/// 1-based line numbers in errors.
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, const std::string& expected_header);

  /// Reads the next data row. Returns false at end of file. Throws
  /// ParseError when the field count does not match the header.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const { return line_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t n_fields_;
  std::size_t line_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line);

/// Fixed-point decimal with `decimals` digits, e.g. format_fixed(1.5, 6)
/// -> "1.500000".
std::string format_fixed(double value, int decimals);

/// Writes `content` to `path` atomically (temp file + rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace svip
