#include "uasrad/spectral_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "uasrad/error.hpp"
#include "uasrad/text.hpp"

namespace uasrad {

SpectralCurve::SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values)
    : wavelengths_(std::move(wavelengths_nm)), values_(std::move(values)) {
  if (wavelengths_.size() != values_.size()) {
    throw DimensionError("spectral curve: " + std::to_string(wavelengths_.size()) +
                         " wavelengths but " + std::to_string(values_.size()) + " values");
  }
  if (wavelengths_.size() < 2) {
    throw InvalidArgument("spectral curve needs at least 2 samples");
  }
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    if (!std::isfinite(wavelengths_[i]) || !std::isfinite(values_[i])) {
      throw InvalidArgument("spectral curve: non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(wavelengths_[i] > wavelengths_[i - 1])) {
      throw InvalidArgument("spectral curve: wavelengths not strictly increasing at " +
                            text::format_double(wavelengths_[i]) + " nm");
    }
  }
}

SpectralCurve SpectralCurve::constant(double value, double lo_nm, double hi_nm) {
  return SpectralCurve({lo_nm, hi_nm}, {value, value});
}

double SpectralCurve::value_at(double x) const {
  if (x < wavelengths_.front() || x > wavelengths_.back()) return 0.0;
  const auto it = std::upper_bound(wavelengths_.begin(), wavelengths_.end(), x);
  if (it == wavelengths_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - wavelengths_.begin());
  const auto lo = hi - 1;
  const double t = (x - wavelengths_[lo]) / (wavelengths_[hi] - wavelengths_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

std::vector<double> SpectralCurve::resample(std::span<const double> grid) const {
  std::vector<double> out;
  out.reserve(grid.size());
  detail::CurveCursor cursor(*this);
  for (double x : grid) out.push_back(cursor(x));
  return out;
}

double SpectralCurve::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double SpectralCurve::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

SpectralCurve SpectralCurve::scaled(double factor) const {
  auto v = values_;
  for (auto& x : v) x *= factor;
  return SpectralCurve(wavelengths_, std::move(v));
}

std::vector<double> union_grid(std::span<const double> a, std::span<const double> b, double lo,
                               double hi) {
  std::vector<double> out;
  out.reserve(a.size() + b.size() + 2);
  out.push_back(lo);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && a[i] <= lo) ++i;
  while (j < b.size() && b[j] <= lo) ++j;
  while (true) {
    const double next_a = i < a.size() ? a[i] : hi;
    const double next_b = j < b.size() ? b[j] : hi;
    const double next = std::min(next_a, next_b);
    if (next >= hi) break;
    out.push_back(next);
    if (next_a == next) ++i;
    if (next_b == next) ++j;
  }
  if (hi > lo) out.push_back(hi);
  return out;
}

double detail::CurveCursor::operator()(double x) {
  if (x < wl_.front() || x > wl_.back()) return 0.0;
  while (i_ + 1 < wl_.size() && wl_[i_ + 1] < x) ++i_;
  while (i_ > 0 && wl_[i_] > x) --i_;
  if (i_ + 1 >= wl_.size()) return v_.back();
  const double t = (x - wl_[i_]) / (wl_[i_ + 1] - wl_[i_]);
  return v_[i_] + t * (v_[i_ + 1] - v_[i_]);
}

SpectralCurve read_curve_csv(std::istream& in) {
  std::vector<double> wl;
  std::vector<double> val;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = text::trim(view);
    if (view.empty()) continue;
    const auto fields = text::split(view, ',');
    if (fields.size() < 2) throw FormatError("expected 2 columns", lineno);
    if (!header_seen) {
      if (text::is_number(fields[0])) throw FormatError("missing header row", lineno);
      header_seen = true;
      continue;
    }
    wl.push_back(text::parse_double(fields[0], lineno));
    val.push_back(text::parse_double(fields[1], lineno));
  }
  if (!header_seen) throw FormatError("empty spectral curve file");
  try {
    return SpectralCurve(std::move(wl), std::move(val));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

SpectralCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open spectral curve " + path.string());
  try {
    return read_curve_csv(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_curve_csv(std::ostream& out, const SpectralCurve& curve, const std::string& value_header) {
  out << "wavelength_nm," << value_header << '\n';
  const auto wl = curve.wavelengths();
  const auto v = curve.values();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << text::format_double(wl[i]) << ',' << text::format_double(v[i]) << '\n';
  }
}

void write_curve_csv(const std::filesystem::path& path, const SpectralCurve& curve,
                     const std::string& value_header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  write_curve_csv(out, curve, value_header);
}

}  // namespace uasrad
