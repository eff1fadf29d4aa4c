#pragma once

// Desk-scale radiative transfer for the modeled at-altitude radiance ratio.
//
// Sensor-reaching radiance for a Lambertian target:
//   L_s = [E0/pi cos(sza) tau1 rho + L_sky rho_d] tau2 + L_path + L_adj
// Downwelling radiance seen by an upward sensor at flight altitude:
//   L_dls = E0/pi cos(sza) tau_sensor + L_sky_sensor
//
// The atmosphere is parametric: a well-mixed aerosol layer whose extinction
// follows the visibility (Koschmieder) relation with an Angstrom wavelength
// exponent, and Beer-Lambert transmission along each path.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uasrad/rsr.hpp"
#include "uasrad/spectral_curve.hpp"

namespace uasrad {

/// Spectral atmosphere terms for one geometry.
struct AtmosphereState {
  SpectralCurve exo_irradiance;       // top-of-atmosphere solar irradiance, W/m^2/nm
  SpectralCurve tau_space_target;     // sun -> target transmission
  SpectralCurve tau_target_sensor;    // target -> sensor transmission
  SpectralCurve sky_radiance;         // diffuse downwelling radiance at the target, W/m^2/sr/nm
  SpectralCurve path_radiance;        // scattered into the target -> sensor line of sight
  SpectralCurve adjacency_radiance;   // background photons scattered into the view
  SpectralCurve tau_space_sensor;     // sun -> sensor altitude transmission
  SpectralCurve sky_radiance_sensor;  // diffuse downwelling radiance at the sensor

  /// Transmissions in [0, 1], radiometric terms >= 0.
  void validate() const;
};

struct Scene {
  SpectralCurve target_reflectance;
  /// Diffuse reflectance; the target reflectance when empty (Lambertian).
  std::optional<SpectralCurve> diffuse_reflectance;
  double solar_zenith_deg = 0.0;
  double ground_altitude_km = 0.168;
  double sensor_altitude_km = 0.282;
  double visibility_km = 23.0;

  void validate() const;
};

/// Radiance leaving the target toward the sensor, before the target -> sensor path.
SpectralCurve surface_leaving_radiance(const Scene& scene, const AtmosphereState& atm);

/// Total radiance reaching a nadir-looking sensor.
SpectralCurve sensor_radiance(const Scene& scene, const AtmosphereState& atm);

/// Downwelling radiance a level, upward-looking sensor records at flight altitude.
SpectralCurve dls_downwelling(const Scene& scene, const AtmosphereState& atm);

// ---------------------------------------------------------------------------
// Parametric atmosphere

enum class AtmosphereModel { tropical, mid_latitude_summer, mid_latitude_winter, us_standard };

AtmosphereModel parse_atmosphere_model(std::string_view name);
std::string_view to_string(AtmosphereModel model);

struct AtmosphereParams {
  double angstrom_exponent = 1.3;
  /// Share of the direct flux removed along a path that reappears as
  /// isotropic downwelling sky radiance.
  double diffuse_fraction = 0.15;
  /// Depth of the well-mixed aerosol layer above the ground.
  double mixing_height_km = 1.5;
  /// Path radiance = path_coefficient * (1 - tau2) * mean sky radiance.
  double path_coefficient = 0.5;
};

/// Parameter preset for a named model atmosphere.
AtmosphereParams preset(AtmosphereModel model);

/// Extinction coefficient [1/km]: (3.912 / V) * (wavelength / 550 nm)^-alpha.
double extinction_coefficient(double wavelength_nm, double visibility_km, double angstrom_exponent);

/// exp(-extinction * path).
double beer_lambert(double extinction_per_km, double path_km);

/// Solar zenith angle [deg] from day of year, UTC hour and site position
/// (longitude positive west).
double solar_zenith_deg(int day_of_year, double time_utc_hours, double latitude_deg,
                        double longitude_west_deg);

struct AtmosphereConditions {
  AtmosphereModel model = AtmosphereModel::us_standard;
  int day_of_year = 79;
  double time_utc_hours = 16.0;
  double visibility_km = 23.0;
  double ground_altitude_km = 0.168;
  double sensor_altitude_km = 0.282;
  double latitude_deg = 43.041;
  double longitude_west_deg = 77.698;
};

struct ParametricAtmosphere {
  AtmosphereState state;
  double solar_zenith_deg = 0.0;
};

/// Builds the atmosphere on the exo-irradiance grid with the model's preset.
ParametricAtmosphere parametric_atmosphere(const AtmosphereConditions& conditions,
                                           const SpectralCurve& exo_irradiance);
ParametricAtmosphere parametric_atmosphere(const AtmosphereConditions& conditions,
                                           const SpectralCurve& exo_irradiance,
                                           const AtmosphereParams& params);

// ---------------------------------------------------------------------------
// Grid study

struct NamedCurve {
  std::string name;
  SpectralCurve curve;
};

/// Swept variables; defaults reproduce the reference study grid.
struct SimulationGrid {
  std::vector<AtmosphereModel> atmosphere_models{
      AtmosphereModel::tropical, AtmosphereModel::mid_latitude_summer,
      AtmosphereModel::mid_latitude_winter, AtmosphereModel::us_standard};
  std::vector<int> days{79, 171, 265, 355};
  std::vector<double> times_utc{14.0, 15.0, 16.0, 17.0, 18.0};
  std::vector<double> visibilities_km{5.0, 10.0, 15.0, 23.0};
  std::vector<double> sensor_altitudes_km{0.169, 0.214, 0.237, 0.259, 0.282, 1.692};
  double ground_altitude_km = 0.168;
  double latitude_deg = 43.041;
  double longitude_west_deg = 77.698;
  /// Carried for completeness; thermal emission is negligible at 0.33-1.2 um.
  double surface_temperature_k = 303.0;
  /// Near-ground and high-altitude analogues kept out of summary statistics.
  std::vector<double> summary_excluded_altitudes_km{0.169, 1.692};

  void validate() const;
  std::size_t cell_count() const;
  bool excluded_from_summary(double sensor_altitude_km) const;
};

struct MaarrRow {
  AtmosphereModel model{};
  int day = 0;
  double time_utc = 0.0;
  double visibility_km = 0.0;
  double sensor_altitude_km = 0.0;
  double solar_zenith_deg = 0.0;
  std::string target;
  int band = 0;
  double true_reflectance = 0.0;       // band reflectance factor at the target
  double recovered_reflectance = 0.0;  // band sensor radiance / band DLS radiance
  double error = 0.0;                  // recovered - true
};

struct MaarrOptions {
  unsigned threads = 1;
  /// Replaces every model's preset when set.
  std::optional<AtmosphereParams> params;
};

/// Evaluates every grid cell for every target and band. Rows are ordered by
/// (model, day, time, visibility, altitude, target, band) in grid order,
/// independent of the thread count.
std::vector<MaarrRow> run_maarr_grid(const SimulationGrid& grid, const RsrSet& rsr,
                                     const SpectralCurve& exo_irradiance,
                                     std::span<const NamedCurve> targets,
                                     const MaarrOptions& options = {});

/// Rows for a single cell (all targets, all bands).
std::vector<MaarrRow> evaluate_maarr_cell(const AtmosphereConditions& conditions,
                                          const AtmosphereParams& params, const RsrSet& rsr,
                                          const SpectralCurve& exo_irradiance,
                                          std::span<const NamedCurve> targets);

struct MaarrSummaryRow {
  std::string variable;  // overall, atmosphere, day, time_utc, visibility_km, sensor_altitude_km, target
  std::string value;
  int band = 0;          // 0 = all bands
  double mean_signed = 0.0;
  double std_signed = 0.0;
  double mean_absolute = 0.0;
  double std_absolute = 0.0;
  std::size_t n = 0;
};

/// Grouped statistics. The sensor_altitude_km grouping reports every altitude;
/// all other groupings leave out the grid's excluded analogue altitudes.
std::vector<MaarrSummaryRow> summarize_maarr(std::span<const MaarrRow> rows, const SimulationGrid& grid);

struct MaarrTrends {
  /// Smallest Spearman correlation of mean |error| against altitude over
  /// every (model, visibility) slice.
  double altitude_min_rho = 0.0;
  /// Largest Spearman correlation of mean |error| against visibility over
  /// every (model, altitude) slice.
  double visibility_max_rho = 0.0;
};

MaarrTrends maarr_trends(std::span<const MaarrRow> rows);

// ---------------------------------------------------------------------------
// Bundled data

/// Directory holding the bundled solar spectrum, RSR and target curves.
std::filesystem::path default_data_dir();
SpectralCurve load_solar_spectrum(const std::filesystem::path& data_dir = default_data_dir());
/// Every *.csv under <data_dir>/targets, sorted by name.
std::vector<NamedCurve> load_targets(const std::filesystem::path& dir);

}  // namespace uasrad
