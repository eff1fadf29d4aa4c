#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uasrad {

/// Tabulated (wavelength [nm], value) series. Wavelengths are strictly
/// increasing and there are at least two samples. Between samples the curve
/// is linear; outside the tabulated range it is zero.
class SpectralCurve {
 public:
  SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values);

  /// Two-point curve holding `value` over [lo_nm, hi_nm].
  static SpectralCurve constant(double value, double lo_nm, double hi_nm);

  /// Samples `fn(wavelength)` on `grid`.
  template <class Fn>
  static SpectralCurve sample(std::vector<double> grid, Fn&& fn) {
    std::vector<double> v;
    v.reserve(grid.size());
    for (double wl : grid) v.push_back(fn(wl));
    return SpectralCurve(std::move(grid), std::move(v));
  }

  std::size_t size() const noexcept { return wavelengths_.size(); }
  std::span<const double> wavelengths() const noexcept { return wavelengths_; }
  std::span<const double> values() const noexcept { return values_; }
  double front_wavelength() const noexcept { return wavelengths_.front(); }
  double back_wavelength() const noexcept { return wavelengths_.back(); }

  double value_at(double wavelength_nm) const;

  /// Linear interpolation onto an increasing grid (zero outside the table).
  std::vector<double> resample(std::span<const double> grid) const;

  double min_value() const;
  double max_value() const;

  /// Multiplies every value by `factor`.
  SpectralCurve scaled(double factor) const;

  friend bool operator==(const SpectralCurve&, const SpectralCurve&) = default;

 private:
  std::vector<double> wavelengths_;
  std::vector<double> values_;
};

/// Sorted union of `a` and `b` restricted to [lo, hi], with lo and hi included.
std::vector<double> union_grid(std::span<const double> a, std::span<const double> b, double lo,
                               double hi);

/// Two-column CSV: a header row, then `wavelength_nm,value` rows.
SpectralCurve read_curve_csv(std::istream& in);
SpectralCurve read_curve_csv(const std::filesystem::path& path);
void write_curve_csv(std::ostream& out, const SpectralCurve& curve,
                     const std::string& value_header = "value");
void write_curve_csv(const std::filesystem::path& path, const SpectralCurve& curve,
                     const std::string& value_header = "value");

namespace detail {

/// Evaluates a curve at non-decreasing abscissae in amortized O(1).
class CurveCursor {
 public:
  explicit CurveCursor(const SpectralCurve& curve) : wl_(curve.wavelengths()), v_(curve.values()) {}
  double operator()(double x);

 private:
  std::span<const double> wl_;
  std::span<const double> v_;
  std::size_t i_ = 0;
};

}  // namespace detail

}  // namespace uasrad
