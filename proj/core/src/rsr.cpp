#include "uasrad/rsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uasrad/error.hpp"
#include "uasrad/text.hpp"

namespace uasrad {

SpectralCurve normalize_counts(const MonochromatorRun& run) {
  if (!(run.gain > 0.0) || !(run.exposure_us > 0.0)) {
    throw InvalidArgument("monochromator run: gain and exposure must be positive");
  }
  if (run.mean_counts.size() != run.wavelengths_nm.size()) {
    throw DimensionError("monochromator run: counts and wavelengths differ in length");
  }
  const double divisor = run.gain * run.exposure_us;
  std::vector<double> v;
  v.reserve(run.mean_counts.size());
  for (double c : run.mean_counts) v.push_back(c / divisor);
  return SpectralCurve(run.wavelengths_nm, std::move(v));
}

RelativeResponse relative_response(const SpectralCurve& normalized_counts,
                                   const SpectralCurve& power, double scale) {
  const auto wl = normalized_counts.wavelengths();
  const auto pw = power.wavelengths();
  if (wl.size() != pw.size() || !std::equal(wl.begin(), wl.end(), pw.begin())) {
    throw DimensionError("relative response: counts and power are on different wavelength grids");
  }
  const auto counts = normalized_counts.values();
  const auto watts = power.values();
  std::vector<double> ratio(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!(watts[i] > 0.0)) {
      throw InvalidArgument("relative response: non-positive power at " +
                            text::format_double(wl[i]) + " nm");
    }
    ratio[i] = counts[i] / watts[i];
  }

  double shift = std::numeric_limits<double>::infinity();
  for (double u : ratio) {
    if (u > 0.0 && u < shift) shift = u;
  }
  if (!std::isfinite(shift)) shift = 0.0;

  bool any_positive = false;
  // residues at rounding level count as pedestal
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * shift;
  for (auto& u : ratio) {
    u = u - shift > noise ? scale * (u - shift) : 0.0;
    any_positive = any_positive || u > 0.0;
  }
  return {SpectralCurve(std::vector<double>(wl.begin(), wl.end()), std::move(ratio)), shift,
          !any_positive};
}

SpectralCurve peak_normalize(const SpectralCurve& rsr) {
  const double peak = rsr.max_value();
  if (!(peak > 0.0)) throw InvalidArgument("peak normalize: maximum is not positive");
  if (rsr.min_value() < 0.0) throw InvalidArgument("peak normalize: negative response");
  std::vector<double> v(rsr.values().begin(), rsr.values().end());
  for (auto& x : v) x /= peak;
  return SpectralCurve(std::vector<double>(rsr.wavelengths().begin(), rsr.wavelengths().end()),
                       std::move(v));
}

double band_effective(const SpectralCurve& spectrum, const SpectralCurve& rsr) {
  const auto rw = rsr.wavelengths();
  const auto rv = rsr.values();
  std::size_t first = rv.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < rv.size(); ++i) {
    if (rv[i] != 0.0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == rv.size()) throw InvalidArgument("band effective: RSR integral is zero");
  const double support_lo = first > 0 ? rw[first - 1] : rw.front();
  const double support_hi = last + 1 < rw.size() ? rw[last + 1] : rw.back();

  if (spectrum.back_wavelength() <= support_lo || spectrum.front_wavelength() >= support_hi) {
    throw InvalidArgument("band effective: spectrum and RSR do not overlap");
  }
  if (spectrum.front_wavelength() > support_lo || spectrum.back_wavelength() < support_hi) {
    throw InvalidArgument("band effective: RSR support [" + text::format_double(support_lo) + ", " +
                          text::format_double(support_hi) + "] nm exceeds spectrum range [" +
                          text::format_double(spectrum.front_wavelength()) + ", " +
                          text::format_double(spectrum.back_wavelength()) + "] nm");
  }

  const auto grid = union_grid(spectrum.wavelengths(), rw, support_lo, support_hi);
  detail::CurveCursor s(spectrum);
  detail::CurveCursor r(rsr);
  double weighted = 0.0;
  double weight = 0.0;
  double prev_x = grid.front();
  double prev_r = r(prev_x);
  double prev_sr = s(prev_x) * prev_r;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid[i];
    const double rx = r(x);
    const double srx = s(x) * rx;
    const double h = x - prev_x;
    weighted += 0.5 * h * (prev_sr + srx);
    weight += 0.5 * h * (prev_r + rx);
    prev_x = x;
    prev_r = rx;
    prev_sr = srx;
  }
  if (weight == 0.0) throw InvalidArgument("band effective: RSR integral is zero");
  return weighted / weight;
}

SpectralCurve gaussian_rsr(double center_nm, double fwhm_nm, double step_nm,
                           double half_width_fwhm) {
  if (!(fwhm_nm > 0.0) || !(step_nm > 0.0) || !(half_width_fwhm > 0.0)) {
    throw InvalidArgument("gaussian rsr: width and step must be positive");
  }
  const double sigma = fwhm_nm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double half = half_width_fwhm * fwhm_nm;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * half / step_nm));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = center_nm - half + static_cast<double>(i) * step_nm;
  return SpectralCurve::sample(std::move(grid), [&](double wl) {
    const double z = (wl - center_nm) / sigma;
    return std::exp(-0.5 * z * z);
  });
}

RsrSet::RsrSet(std::vector<SpectralCurve> curves) : curves_(std::move(curves)) {
  if (curves_.size() != kBandCount) {
    throw InvalidArgument("RSR set needs exactly 5 curves, got " + std::to_string(curves_.size()));
  }
}

const SpectralCurve& RsrSet::band(int band_index) const {
  if (band_index < 1 || band_index > kBandCount) {
    throw InvalidArgument("band index out of range: " + std::to_string(band_index));
  }
  return curves_[static_cast<std::size_t>(band_index - 1)];
}

RsrSet gaussian_rsr_set() {
  std::vector<SpectralCurve> curves;
  for (const auto& b : kCameraBands) curves.push_back(gaussian_rsr(b.center_nm, b.fwhm_nm));
  return RsrSet(std::move(curves));
}

std::string rsr_file_name(int band_index) {
  return "rsr_" + std::to_string(band_index) + "_" +
         std::string(kCameraBands.at(static_cast<std::size_t>(band_index - 1)).name) + ".csv";
}

RsrSet load_rsr_dir(const std::filesystem::path& dir) {
  std::vector<SpectralCurve> curves;
  for (int i = 1; i <= kBandCount; ++i) {
    auto path = dir / rsr_file_name(i);
    if (!std::filesystem::exists(path)) {
      throw FormatError("missing RSR file " + path.string());
    }
    curves.push_back(read_curve_csv(path));
  }
  return RsrSet(std::move(curves));
}

void write_rsr_dir(const std::filesystem::path& dir, const RsrSet& set) {
  std::filesystem::create_directories(dir);
  for (int i = 1; i <= kBandCount; ++i) write_curve_csv(dir / rsr_file_name(i), set.band(i), "rsr");
}

}  // namespace uasrad
