#include "uasrad/image.hpp"

#include <algorithm>

namespace uasrad {

RawImage::RawImage(std::size_t width, std::size_t height, int band_index, int bits_per_pixel,
                   std::vector<std::uint16_t> pixels)
    : Plane(width, height, band_index, std::move(pixels)), bits_(bits_per_pixel) {
  if (bits_ < 1 || bits_ > 16) throw InvalidArgument("bits per pixel must be in 1..16");
  const std::uint32_t limit = 1u << bits_;
  const auto it = std::find_if(pixels_.begin(), pixels_.end(),
                               [limit](std::uint16_t p) { return p >= limit; });
  if (it != pixels_.end()) {
    const auto i = static_cast<std::size_t>(it - pixels_.begin());
    throw InvalidArgument("raw pixel (" + std::to_string(i % width_) + ", " +
                          std::to_string(i / width_) + ") = " + std::to_string(*it) +
                          " does not fit in " + std::to_string(bits_) + " bits");
  }
}

RadianceImage::RadianceImage(std::size_t width, std::size_t height, int band_index,
                             std::vector<double> pixels, std::size_t clamp_count)
    : Plane(width, height, band_index, std::move(pixels)), clamps_(clamp_count) {
  if (std::any_of(pixels_.begin(), pixels_.end(), [](double v) { return !(v >= 0.0); })) {
    throw InvalidArgument("radiance image holds a negative or NaN pixel");
  }
}

ReflectanceImage::ReflectanceImage(std::size_t width, std::size_t height, int band_index,
                                   std::vector<double> pixels)
    : Plane(width, height, band_index, std::move(pixels)),
      out_of_range_(uasrad::out_of_range_fraction(pixels_)) {}

double out_of_range_fraction(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(),
                               [](double v) { return !(v >= 0.0 && v <= 1.0); });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

}  // namespace uasrad
