#pragma once

// Digital count to spectral radiance conversion.
//
//   L = V(x, y) * R(y) * (I_raw - dark_level) * a1 / (gain * exposure_us * 2^N)
//   V = 1 / k,  k = 1 + k0 r + k1 r^2 + ... + k5 r^6,  r = distance to vignette center
//   R = 1 / (1 + a2 y / exposure_us + a3 y)

#include <array>
#include <vector>

#include "uasrad/image.hpp"

namespace uasrad {

struct VignetteModel {
  double center_x = 0.0;
  double center_y = 0.0;
  std::array<double, 6> coefficients{};
};

struct RadiometricMetadata {
  int band_index = 1;
  double a1 = 1.0;
  double a2 = 0.0;
  double a3 = 0.0;
  int gain = 1;               // 1, 2, 4 or 8
  double exposure_us = 1.0;   // microseconds
  double dark_level = 0.0;    // counts
  VignetteModel vignette;
  int bits_per_pixel = 16;

  /// Throws MetadataError on a bad gain, exposure, dark level, a1 or bit depth.
  void validate() const;
};

/// 1/k at pixel (x, y). Throws MetadataError if k <= 0 there.
double vignette_factor(const VignetteModel& model, double x, double y);

/// Readout correction for pixel row `y`. Throws MetadataError if the
/// denominator is not positive.
double row_correction(const RadiometricMetadata& meta, double y);

/// Converts a raw plane to radiance. Negative results are clamped to 0 and
/// counted in the result's clamp_count().
RadianceImage dc_to_radiance(const RawImage& raw, const RadiometricMetadata& meta);

/// Exact inverse of dc_to_radiance (before clamping): the real-valued counts
/// that produce `radiance` under `meta`.
std::vector<double> radiance_to_counts(const RadianceImage& radiance,
                                       const RadiometricMetadata& meta);

/// Rounds radiance_to_counts to the nearest integer count, saturating to
/// [0, 2^N - 1]. Used to synthesize raw frames.
RawImage quantize_radiance(const RadianceImage& radiance, const RadiometricMetadata& meta);

}  // namespace uasrad
