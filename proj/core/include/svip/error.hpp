#pragma once

#include <stdexcept>
#include <string>

namespace svip {

/// Base class for all errors raised by the pipeline.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (CSV, JSON lines, GeoJSON, config).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent pipeline configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace svip
