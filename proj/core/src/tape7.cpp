#include "uasrad/tape7.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>

#include "uasrad/error.hpp"
#include "uasrad/text.hpp"

namespace uasrad {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

SpectralCurve sorted_curve(const std::vector<double>& wl, const std::vector<double>& v) {
  std::vector<std::size_t> idx(wl.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return wl[a] < wl[b]; });
  std::vector<double> w2;
  std::vector<double> v2;
  for (auto i : idx) {
    w2.push_back(wl[i]);
    v2.push_back(v[i]);
  }
  return SpectralCurve(std::move(w2), std::move(v2));
}

}  // namespace

SpectralCurve Tape7Record::total_radiance_curve() const { return sorted_curve(wavelengths_nm, total_radiance); }

SpectralCurve Tape7Record::ground_reflected_curve() const {
  return sorted_curve(wavelengths_nm, ground_reflected);
}

Tape7Record ingest_tape7(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> wl_col, total_col, ground_col;
  std::size_t width = 0;
  double scale = 1.0;
  bool header = false;
  Tape7Record rec;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = text::split_ws(line);
    if (tokens.empty()) continue;
    if (!header) {
      for (std::size_t i = 0; i < tokens.size() && !wl_col; ++i)
        if (upper(tokens[i]).starts_with("WAV")) wl_col = i;
      if (!wl_col) continue;
      header = true;
      width = tokens.size();
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto t = upper(tokens[i]);
        if (t == "TOTAL_RAD" || t == "TOT_RAD") {
          total_col = i;
        } else if (t == "GRND_RFLT") {
          ground_col = i;
        }
      }
      const auto all = upper(line);
      if (all.find("MCRN") != std::string::npos || all.find("MICRON") != std::string::npos ||
          all.find("(UM)") != std::string::npos || all.find("_UM") != std::string::npos ||
          all.find(" UM") != std::string::npos) {
        scale = 1000.0;
      }
      if (!total_col) throw FormatError("tape7: missing required column TOTAL_RAD", line_no);
      if (!ground_col) throw FormatError("tape7: missing required column GRND_RFLT", line_no);
      continue;
    }
    if (tokens.front().starts_with("-9999")) break;
    if (tokens.size() < width) {
      throw FormatError("tape7: expected " + std::to_string(width) + " columns, got " +
                            std::to_string(tokens.size()),
                        line_no);
    }
    const double wl = text::parse_double(tokens[*wl_col], line_no) * scale;
    const double total = text::parse_double(tokens[*total_col], line_no);
    const double ground = text::parse_double(tokens[*ground_col], line_no);
    if (total < 0.0 || ground < 0.0) throw FormatError("tape7: negative radiance", line_no);
    rec.wavelengths_nm.push_back(wl);
    rec.total_radiance.push_back(total);
    rec.ground_reflected.push_back(ground);
  }
  if (!header) throw FormatError("tape7: no header row naming WAVELEN, TOTAL_RAD and GRND_RFLT", line_no);
  if (rec.wavelengths_nm.empty()) throw FormatError("tape7: no data rows", line_no);
  return rec;
}

Tape7Record ingest_tape7(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return ingest_tape7(in);
}

SpectralCurve maarr_reflectance(const Tape7Record& sensor_run, const Tape7Record& reference_run) {
  const auto sensor = sensor_run.total_radiance_curve();
  const auto reference = reference_run.ground_reflected_curve();
  const auto grid = sensor.wavelengths();
  std::vector<double> v;
  v.reserve(grid.size());
  detail::CurveCursor ref(reference);
  for (double wl : grid) {
    if (wl < reference.front_wavelength() || wl > reference.back_wavelength()) {
      throw InvalidArgument("tape7: reference run does not cover " + text::format_double(wl) + " nm");
    }
    const double r = ref(wl);
    if (!(r > 0.0)) throw CalibrationError("tape7: zero reference radiance at " + text::format_double(wl) + " nm");
    v.push_back(sensor.value_at(wl) / r);
  }
  return SpectralCurve(std::vector<double>(grid.begin(), grid.end()), std::move(v));
}

}  // namespace uasrad
