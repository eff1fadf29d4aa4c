#pragma once

// Single-band pixel planes for the three pipeline stages.
// Coordinates are (x = column, y = row), zero-based, row-major storage.
// Band index 1..5 names a camera band; 0 marks a derived product (NDVI).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uasrad/error.hpp"

namespace uasrad {

struct Roi {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

template <class T>
class Plane {
 public:
  Plane(std::size_t width, std::size_t height, int band_index, std::vector<T> pixels)
      : width_(width), height_(height), band_(band_index), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0) throw DimensionError("image must be non-empty");
    if (pixels_.size() != width_ * height_) {
      throw DimensionError("image: " + std::to_string(pixels_.size()) + " pixels for " +
                           std::to_string(width_) + "x" + std::to_string(height_));
    }
    if (band_ < 0 || band_ > 5) throw InvalidArgument("band index must be in 0..5");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  int band_index() const noexcept { return band_; }
  std::span<const T> pixels() const noexcept { return pixels_; }
  const T& at(std::size_t x, std::size_t y) const { return pixels_.at(y * width_ + x); }
  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

 protected:
  std::size_t width_;
  std::size_t height_;
  int band_;
  std::vector<T> pixels_;
};

/// Raw digital counts; every value < 2^bits_per_pixel.
class RawImage : public Plane<std::uint16_t> {
 public:
  RawImage(std::size_t width, std::size_t height, int band_index, int bits_per_pixel,
           std::vector<std::uint16_t> pixels);
  int bits_per_pixel() const noexcept { return bits_; }

 private:
  int bits_;
};

/// Spectral radiance [W/m^2/sr/nm], non-negative.
class RadianceImage : public Plane<double> {
 public:
  RadianceImage(std::size_t width, std::size_t height, int band_index, std::vector<double> pixels,
                std::size_t clamp_count = 0);
  /// Pixels that went negative after dark subtraction and were set to 0.
  std::size_t clamp_count() const noexcept { return clamps_; }

 private:
  std::size_t clamps_;
};

/// Reflectance factor (unitless, not clamped).
class ReflectanceImage : public Plane<double> {
 public:
  ReflectanceImage(std::size_t width, std::size_t height, int band_index,
                   std::vector<double> pixels);
  /// Fraction of pixels outside [0, 1].
  double out_of_range_fraction() const noexcept { return out_of_range_; }

 private:
  double out_of_range_;
};

/// Fraction of values outside [0, 1].
double out_of_range_fraction(std::span<const double> values);

}  // namespace uasrad
