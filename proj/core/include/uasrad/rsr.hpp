#pragma once

// Relative spectral response reduction and band-effective integration.

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

#include "uasrad/spectral_curve.hpp"

namespace uasrad {

inline constexpr int kBandCount = 5;

/// Scale applied to the count-to-power ratio when reducing monochromator data.
/// The value is carried over unchanged from the source calibration procedure.
inline constexpr double kRsrScale = 0.9975;

/// One band's monochromator sweep: ROI-mean counts and the meter's power reading
/// at each wavelength.
struct MonochromatorRun {
  std::vector<double> wavelengths_nm;
  std::vector<double> mean_counts;
  std::vector<double> power_w;
  double gain = 1.0;
  double exposure_us = 1.0;
};

/// Counts divided by gain times exposure.
SpectralCurve normalize_counts(const MonochromatorRun& run);

struct RelativeResponse {
  SpectralCurve curve;
  /// Smallest positive count-to-power ratio; subtracted as the dark pedestal.
  double shift = 0.0;
  /// True when nothing survives the pedestal removal (all-zero curve).
  bool degenerate = false;
};

/// Pedestal-removed response: scale * (ratio - shift), floored at zero, where
/// ratio = normalized counts / power and shift is the smallest positive ratio.
RelativeResponse relative_response(const SpectralCurve& normalized_counts,
                                   const SpectralCurve& power, double scale = kRsrScale);

/// Divides by the maximum so the peak is exactly 1.
SpectralCurve peak_normalize(const SpectralCurve& rsr);

/// RSR-weighted mean of `spectrum`:
///   integral(spectrum * rsr) / integral(rsr)
/// using the trapezoidal rule on the union of both grids, both curves linearly
/// interpolated. The nonzero support of `rsr` must lie inside the spectrum's
/// tabulated range.
double band_effective(const SpectralCurve& spectrum, const SpectralCurve& rsr);

struct BandSpec {
  std::string_view name;
  double center_nm;
  double fwhm_nm;
};

/// Five-band multispectral camera (blue, green, red, red edge, NIR).
inline constexpr std::array<BandSpec, kBandCount> kCameraBands{{
    {"blue", 475.0, 20.0},
    {"green", 560.0, 20.0},
    {"red", 668.0, 10.0},
    {"red_edge", 717.0, 10.0},
    {"nir", 840.0, 40.0},
}};

/// Peak-normalized Gaussian response sampled every `step_nm` over
/// center +/- half_width_fwhm * fwhm.
SpectralCurve gaussian_rsr(double center_nm, double fwhm_nm, double step_nm = 1.0,
                           double half_width_fwhm = 3.0);

/// Exactly five response curves, index 0 = band 1.
class RsrSet {
 public:
  explicit RsrSet(std::vector<SpectralCurve> curves);
  const SpectralCurve& band(int band_index) const;  // 1-based
  const std::vector<SpectralCurve>& curves() const noexcept { return curves_; }

 private:
  std::vector<SpectralCurve> curves_;
};

/// Gaussian approximations of the camera bands.
RsrSet gaussian_rsr_set();

/// File name used for band `band_index` (1-based) inside an RSR directory.
std::string rsr_file_name(int band_index);

/// Loads `rsr_<i>_<name>.csv` for i = 1..5.
RsrSet load_rsr_dir(const std::filesystem::path& dir);
void write_rsr_dir(const std::filesystem::path& dir, const RsrSet& set);

}  // namespace uasrad
