#include "uasrad/reflectance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "uasrad/text.hpp"

namespace uasrad {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// sin(e) is evaluated as cos(90 - e) so that a sun-sensor angle of exactly
// 90 - e yields bit-identical numerator and denominator terms.
double cos_deg(double deg) { return std::cos(deg * kDegToRad); }

std::string band_name(std::size_t i) { return std::string(kCameraBands[i].name); }

}  // namespace

void DlsRecord::validate() const {
  for (std::size_t i = 0; i < raw_irradiance.size(); ++i) {
    if (!(raw_irradiance[i] >= 0.0)) {
      throw InvalidArgument("DLS irradiance is negative in band " + band_name(i));
    }
  }
  if (!(solar_elevation_deg >= 0.0 && solar_elevation_deg <= 90.0)) {
    throw InvalidArgument("solar elevation must be within [0, 90] degrees");
  }
  if (!(sun_sensor_angle_deg >= 0.0 && sun_sensor_angle_deg <= 180.0)) {
    throw InvalidArgument("sun-sensor angle must be within [0, 180] degrees");
  }
  if (!(fresnel_factor > 0.0)) throw InvalidArgument("Fresnel factor must be positive");
  if (!(diffuse_ratio >= 0.0)) throw InvalidArgument("diffuse ratio must be non-negative");
}

void PanelObservation::validate() const {
  for (std::size_t i = 0; i < kBandCount; ++i) {
    if (!(ground_reflectance[i] > 0.0 && ground_reflectance[i] < 1.5)) {
      throw CalibrationError("panel '" + panel_id + "' ground reflectance out of (0, 1.5) in band " +
                             band_name(i));
    }
    if (!(mean_radiance[i] > 0.0)) {
      throw CalibrationError("panel '" + panel_id + "' has non-positive radiance in band " +
                             band_name(i));
    }
  }
}

BandVector dls_correct(const DlsRecord& rec) {
  rec.validate();
  const double numerator = rec.diffuse_ratio + cos_deg(90.0 - rec.solar_elevation_deg);
  const double denominator = rec.fresnel_factor * (rec.diffuse_ratio + cos_deg(rec.sun_sensor_angle_deg));
  if (!(denominator > 0.0)) {
    throw CalibrationError("DLS orientation correction denominator is not positive (sun-sensor angle " +
                           text::format_double(rec.sun_sensor_angle_deg) + " deg)");
  }
  const double factor = numerator / denominator;
  BandVector out{};
  for (std::size_t i = 0; i < kBandCount; ++i) out[i] = rec.raw_irradiance[i] * factor;
  return out;
}

BandVector irradiance_to_radiance(const BandVector& irradiance) {
  BandVector out{};
  for (std::size_t i = 0; i < kBandCount; ++i) out[i] = irradiance[i] / std::numbers::pi;
  return out;
}

double dls_distance(const BandVector& a, const BandVector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kBandCount; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

SelectionMode parse_selection_mode(std::string_view name) {
  const auto n = text::to_lower(name);
  if (n == "dls") return SelectionMode::dls;
  if (n == "time") return SelectionMode::time;
  if (n == "single") return SelectionMode::single;
  throw ConfigError("unknown selection mode '" + std::string(name) + "' (dls, time, single)");
}

std::string_view to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::dls: return "dls";
    case SelectionMode::time: return "time";
    case SelectionMode::single: return "single";
  }
  return "?";
}

Selection select_calibration(const DlsRecord& image_dls, std::span<const CalibrationImage> candidates,
                             SelectionMode mode, double image_timestamp) {
  if (candidates.empty()) throw CalibrationError("no calibration images to select from");

  const auto image_vec = dls_correct(image_dls);
  std::vector<Selection> scored(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored[i] = {i, dls_distance(image_vec, dls_correct(candidates[i].dls)),
                 std::abs(image_timestamp - candidates[i].timestamp)};
  }

  const auto tie_key = [&](const Selection& s) {
    return std::tie(candidates[s.index].timestamp, candidates[s.index].image_id);
  };

  if (mode == SelectionMode::single) {
    const auto flagged = std::count_if(candidates.begin(), candidates.end(),
                                       [](const CalibrationImage& c) { return c.designated; });
    if (flagged > 1) throw CalibrationError("more than one calibration image is designated");
    const auto best = std::min_element(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      const bool da = candidates[a.index].designated;
      const bool db = candidates[b.index].designated;
      if (da != db) return da;
      return tie_key(a) < tie_key(b);
    });
    return *best;
  }

  const auto metric = [mode](const Selection& s) {
    return mode == SelectionMode::dls ? s.dls_distance : s.time_delta;
  };
  const auto best = std::min_element(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (metric(a) != metric(b)) return metric(a) < metric(b);
    return tie_key(a) < tie_key(b);
  });
  return *best;
}

ElmModel fit_elm_1pt(const CalibrationImage& cal) {
  cal.bright.validate();
  ElmModel m;
  m.source_image = cal.image_id;
  for (std::size_t i = 0; i < kBandCount; ++i) {
    m.slope[i] = cal.bright.ground_reflectance[i] / cal.bright.mean_radiance[i];
    m.bias[i] = 0.0;
  }
  return m;
}

ElmModel fit_elm_2pt(const CalibrationImage& cal) {
  if (!cal.dark) throw CalibrationError("image '" + cal.image_id + "' has no dark panel for 2-point ELM");
  cal.bright.validate();
  cal.dark->validate();
  const auto& b = cal.bright;
  const auto& d = *cal.dark;
  ElmModel m;
  m.source_image = cal.image_id;
  for (std::size_t i = 0; i < kBandCount; ++i) {
    const double dl = b.mean_radiance[i] - d.mean_radiance[i];
    if (dl == 0.0) {
      throw CalibrationError("degenerate panels: bright and dark radiance coincide in band " + band_name(i));
    }
    const double slope = (b.ground_reflectance[i] - d.ground_reflectance[i]) / dl;
    if (!(slope > 0.0)) {
      throw CalibrationError("2-point ELM slope is not positive in band " + band_name(i));
    }
    const double bias = b.ground_reflectance[i] - slope * b.mean_radiance[i];
    const double bias_dark = d.ground_reflectance[i] - slope * d.mean_radiance[i];
    const double scale = std::max({1.0, std::abs(b.ground_reflectance[i]), slope * b.mean_radiance[i]});
    if (std::abs(bias - bias_dark) > 1e-12 * scale) {
      throw CalibrationError("2-point ELM bias differs between panels in band " + band_name(i));
    }
    m.slope[i] = slope;
    m.bias[i] = bias;
  }
  return m;
}

ReflectanceImage apply_elm(const ElmModel& model, const RadianceImage& image) {
  const auto band = static_cast<std::size_t>(image.band_index() - 1);
  const double slope = model.slope[band];
  const double bias = model.bias[band];
  std::vector<double> out;
  out.reserve(image.pixels().size());
  for (double l : image.pixels()) out.push_back(slope * l + bias);
  return ReflectanceImage(image.width(), image.height(), image.band_index(), std::move(out));
}

ReflectanceImage aarr(const RadianceImage& image, const DlsRecord& dls) {
  const auto band = static_cast<std::size_t>(image.band_index() - 1);
  const double downwelling = irradiance_to_radiance(dls_correct(dls))[band];
  if (!(downwelling > 0.0)) {
    throw CalibrationError("no downwelling illumination recorded in band " + band_name(band));
  }
  std::vector<double> out;
  out.reserve(image.pixels().size());
  for (double l : image.pixels()) out.push_back(l / downwelling);
  return ReflectanceImage(image.width(), image.height(), image.band_index(), std::move(out));
}

double extract_panel(const RadianceImage& image, const Roi& roi, RoiStatistic statistic) {
  if (roi.width == 0 || roi.height == 0) throw InvalidArgument("panel ROI is empty");
  if (roi.x + roi.width > image.width() || roi.y + roi.height > image.height()) {
    throw InvalidArgument("panel ROI exceeds image bounds");
  }
  std::vector<double> values;
  values.reserve(roi.width * roi.height);
  for (std::size_t y = roi.y; y < roi.y + roi.height; ++y) {
    for (std::size_t x = roi.x; x < roi.x + roi.width; ++x) values.push_back(image.at(x, y));
  }
  if (statistic == RoiStatistic::median) {
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    if (values.size() % 2 == 1) return values[mid];
    const double upper = values[mid];
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace uasrad
