#include "uasrad/radiance.hpp"

#include <algorithm>
#include <cmath>

#include "uasrad/text.hpp"

namespace uasrad {

namespace {

double vignette_k(const VignetteModel& m, double x, double y) {
  const double r = std::hypot(x - m.center_x, y - m.center_y);
  const auto& c = m.coefficients;
  // 1 + r*(k0 + r*(k1 + ... + r*k5))
  double poly = c[5];
  for (int j = 4; j >= 0; --j) poly = poly * r + c[static_cast<std::size_t>(j)];
  return 1.0 + r * poly;
}

double scale_denominator(const RadiometricMetadata& meta) {
  return static_cast<double>(meta.gain) * meta.exposure_us * std::ldexp(1.0, meta.bits_per_pixel);
}

}  // namespace

void RadiometricMetadata::validate() const {
  if (gain != 1 && gain != 2 && gain != 4 && gain != 8) {
    throw MetadataError("gain must be 1, 2, 4 or 8 (got " + std::to_string(gain) + ")");
  }
  if (!(exposure_us > 0.0)) throw MetadataError("exposure_us must be positive");
  if (!(dark_level >= 0.0)) throw MetadataError("dark_level must be non-negative");
  if (!(a1 > 0.0)) throw MetadataError("a1 must be positive");
  if (bits_per_pixel < 1 || bits_per_pixel > 16) throw MetadataError("bits_per_pixel must be 1..16");
  if (band_index < 1 || band_index > 5) throw MetadataError("band index must be 1..5");
}

double vignette_factor(const VignetteModel& model, double x, double y) {
  const double k = vignette_k(model, x, y);
  if (!(k > 0.0)) {
    throw MetadataError("vignette correction factor k = " + text::format_double(k) +
                        " is not positive at pixel (" + text::format_double(x) + ", " +
                        text::format_double(y) + ")");
  }
  return 1.0 / k;
}

double row_correction(const RadiometricMetadata& meta, double y) {
  const double d = 1.0 + meta.a2 * y / meta.exposure_us + meta.a3 * y;
  if (!(d > 0.0)) {
    throw MetadataError("row correction denominator " + text::format_double(d) +
                        " is not positive at row " + text::format_double(y));
  }
  return 1.0 / d;
}

RadianceImage dc_to_radiance(const RawImage& raw, const RadiometricMetadata& meta) {
  meta.validate();
  if (raw.band_index() != meta.band_index) {
    throw DimensionError("raw image is band " + std::to_string(raw.band_index()) +
                         " but metadata is band " + std::to_string(meta.band_index));
  }
  const std::uint32_t limit = 1u << meta.bits_per_pixel;
  const double scale = meta.a1 / scale_denominator(meta);
  const auto w = raw.width();
  const auto h = raw.height();
  const auto src = raw.pixels();
  std::vector<double> out(w * h);
  std::size_t clamps = 0;
  for (std::size_t y = 0; y < h; ++y) {
    const double row = row_correction(meta, static_cast<double>(y)) * scale;
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t i = y * w + x;
      if (src[i] >= limit) {
        throw MetadataError("pixel value " + std::to_string(src[i]) + " exceeds " +
                            std::to_string(meta.bits_per_pixel) + "-bit range");
      }
      const double v = vignette_factor(meta.vignette, static_cast<double>(x), static_cast<double>(y));
      const double l = v * row * (static_cast<double>(src[i]) - meta.dark_level);
      if (l < 0.0) {
        ++clamps;
        out[i] = 0.0;
      } else {
        out[i] = l;
      }
    }
  }
  return RadianceImage(w, h, raw.band_index(), std::move(out), clamps);
}

std::vector<double> radiance_to_counts(const RadianceImage& radiance,
                                       const RadiometricMetadata& meta) {
  meta.validate();
  const double inv_scale = scale_denominator(meta) / meta.a1;
  const auto w = radiance.width();
  const auto h = radiance.height();
  const auto src = radiance.pixels();
  std::vector<double> counts(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    const double row = row_correction(meta, static_cast<double>(y));
    for (std::size_t x = 0; x < w; ++x) {
      const double v = vignette_factor(meta.vignette, static_cast<double>(x), static_cast<double>(y));
      counts[y * w + x] = src[y * w + x] * inv_scale / (v * row) + meta.dark_level;
    }
  }
  return counts;
}

RawImage quantize_radiance(const RadianceImage& radiance, const RadiometricMetadata& meta) {
  const auto counts = radiance_to_counts(radiance, meta);
  const double max_count = std::ldexp(1.0, meta.bits_per_pixel) - 1.0;
  std::vector<std::uint16_t> px(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    px[i] = static_cast<std::uint16_t>(std::clamp(std::round(counts[i]), 0.0, max_count));
  }
  return RawImage(radiance.width(), radiance.height(), radiance.band_index(), meta.bits_per_pixel,
                  std::move(px));
}

}  // namespace uasrad
