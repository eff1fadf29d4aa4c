#pragma once

// Radiance to reflectance factor: 1-point ELM, 2-point ELM and the
// at-altitude radiance ratio (AARR) driven by the downwelling light sensor.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "uasrad/image.hpp"
#include "uasrad/rsr.hpp"

namespace uasrad {

using BandVector = std::array<double, kBandCount>;

/// Diffuse-to-direct irradiance ratio assumed when a record carries none
/// (roughly 15 % diffuse, 85 % direct).
inline constexpr double kDefaultDiffuseRatio = 0.166;

/// One downwelling light sensor reading.
struct DlsRecord {
  BandVector raw_irradiance{};        // W/m^2/nm
  double solar_elevation_deg = 90.0;  // 0..90
  double sun_sensor_angle_deg = 0.0;  // angle between sun direction and sensor normal, 0..180
  double fresnel_factor = 1.0;
  double diffuse_ratio = kDefaultDiffuseRatio;
  double timestamp = 0.0;  // seconds since epoch

  void validate() const;
};

struct PanelObservation {
  std::string panel_id;
  BandVector ground_reflectance{};
  BandVector mean_radiance{};  // ROI mean, W/m^2/sr/nm
  Roi roi;

  void validate() const;
};

struct CalibrationImage {
  std::string image_id;
  PanelObservation bright;
  std::optional<PanelObservation> dark;
  DlsRecord dls;
  double timestamp = 0.0;
  /// Marks the image used for every frame in single-image selection.
  bool designated = false;
};

/// Per-band linear map reflectance = slope * radiance + bias.
struct ElmModel {
  BandVector slope{};
  BandVector bias{};
  std::string source_image;
};

/// Orientation-corrected irradiance: the reading a level, upward-facing
/// sensor would have produced.
///   E = E_raw * (diffuse_ratio + sin(elevation)) / (fresnel * (diffuse_ratio + cos(sun_sensor)))
/// Throws CalibrationError when the denominator is not positive.
BandVector dls_correct(const DlsRecord& rec);

/// Lambertian irradiance to radiance (divide by pi).
BandVector irradiance_to_radiance(const BandVector& irradiance);

/// Euclidean distance between two five-band vectors.
double dls_distance(const BandVector& a, const BandVector& b);

enum class SelectionMode { dls, time, single };

SelectionMode parse_selection_mode(std::string_view name);
std::string_view to_string(SelectionMode mode);

struct Selection {
  std::size_t index = 0;       // into the candidate list
  double dls_distance = 0.0;   // between corrected irradiance vectors
  double time_delta = 0.0;     // |image - candidate| seconds
};

/// Picks the calibration image for a frame.
///  - dls:    smallest distance between corrected irradiance vectors
///  - time:   smallest |timestamp difference|
///  - single: the designated candidate (earliest candidate if none is designated)
/// Ties go to the earliest timestamp, then the lexicographically smallest id.
Selection select_calibration(const DlsRecord& image_dls, std::span<const CalibrationImage> candidates,
                             SelectionMode mode, double image_timestamp);

/// slope = rho_bright / L_bright, bias = 0.
ElmModel fit_elm_1pt(const CalibrationImage& cal);

/// Line through the dark and bright panel points.
ElmModel fit_elm_2pt(const CalibrationImage& cal);

/// Applies the band's slope and bias pixelwise. No clamping.
ReflectanceImage apply_elm(const ElmModel& model, const RadianceImage& image);

/// reflectance = L / (corrected DLS irradiance / pi) for the image's band.
ReflectanceImage aarr(const RadianceImage& image, const DlsRecord& dls);

enum class RoiStatistic { mean, median };

/// Mean (or median) radiance inside `roi`.
double extract_panel(const RadianceImage& image, const Roi& roi,
                     RoiStatistic statistic = RoiStatistic::mean);

}  // namespace uasrad
