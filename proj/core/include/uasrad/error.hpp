#pragma once

#include <stdexcept>
#include <string>

namespace uasrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad shape, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Per-image sensor metadata is unusable (non-positive vignette factor, bad gain, ...).
class MetadataError : public Error {
 public:
  using Error::Error;
};

/// Two images or curves that must share a shape do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Panel or downwelling data cannot produce a reflectance model.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid run configuration (grid config, manifest fields, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace uasrad
