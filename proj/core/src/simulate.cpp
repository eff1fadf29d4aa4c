#include "uasrad/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>
#include <tuple>

#include "uasrad/error.hpp"
#include "uasrad/evaluate.hpp"
#include "uasrad/text.hpp"

#ifndef UASRAD_DATA_DIR
#define UASRAD_DATA_DIR "data"
#endif

namespace uasrad {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kKoschmieder = 3.912;
constexpr double kReferenceWavelengthNm = 550.0;

std::vector<double> common_grid(std::initializer_list<const SpectralCurve*> curves) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto* c : curves) {
    lo = std::max(lo, c->front_wavelength());
    hi = std::min(hi, c->back_wavelength());
  }
  if (!(lo < hi)) throw InvalidArgument("spectral curves have incompatible wavelength ranges");
  std::vector<double> grid;
  bool first = true;
  for (const auto* c : curves) {
    if (first) {
      grid = union_grid(c->wavelengths(), {}, lo, hi);
      first = false;
    } else {
      grid = union_grid(grid, c->wavelengths(), lo, hi);
    }
  }
  return grid;
}

void check_range(const SpectralCurve& c, const char* name, double lo, double hi) {
  for (double v : c.values()) {
    if (!(v >= lo && v <= hi)) {
      throw InvalidArgument(std::string("atmosphere: ") + name + " value " + text::format_double(v) +
                            " outside [" + text::format_double(lo) + ", " + text::format_double(hi) + "]");
    }
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void AtmosphereState::validate() const {
  check_range(exo_irradiance, "exo irradiance", 0.0, kInf);
  check_range(tau_space_target, "tau space->target", 0.0, 1.0);
  check_range(tau_target_sensor, "tau target->sensor", 0.0, 1.0);
  check_range(tau_space_sensor, "tau space->sensor", 0.0, 1.0);
  check_range(sky_radiance, "sky radiance", 0.0, kInf);
  check_range(sky_radiance_sensor, "sensor sky radiance", 0.0, kInf);
  check_range(path_radiance, "path radiance", 0.0, kInf);
  check_range(adjacency_radiance, "adjacency radiance", 0.0, kInf);
}

void Scene::validate() const {
  if (target_reflectance.min_value() < 0.0) throw InvalidArgument("scene: negative target reflectance");
  if (diffuse_reflectance && diffuse_reflectance->min_value() < 0.0) {
    throw InvalidArgument("scene: negative diffuse reflectance");
  }
  if (!(sensor_altitude_km > ground_altitude_km)) {
    throw InvalidArgument("scene: sensor must be above the ground");
  }
  if (!(visibility_km > 0.0)) throw InvalidArgument("scene: visibility must be positive");
  if (!(solar_zenith_deg >= 0.0 && solar_zenith_deg <= 90.0)) {
    throw InvalidArgument("scene: solar zenith must be within [0, 90] degrees");
  }
}

SpectralCurve surface_leaving_radiance(const Scene& scene, const AtmosphereState& atm) {
  scene.validate();
  const auto& rho = scene.target_reflectance;
  const auto& rho_d = scene.diffuse_reflectance ? *scene.diffuse_reflectance : rho;
  auto grid = common_grid({&atm.exo_irradiance, &atm.tau_space_target, &atm.sky_radiance, &rho, &rho_d});
  const double mu = std::cos(scene.solar_zenith_deg * kDegToRad);
  detail::CurveCursor e(atm.exo_irradiance), t1(atm.tau_space_target), sky(atm.sky_radiance), r(rho),
      rd(rho_d);
  std::vector<double> v;
  v.reserve(grid.size());
  for (double wl : grid) v.push_back(e(wl) / kPi * mu * t1(wl) * r(wl) + sky(wl) * rd(wl));
  return SpectralCurve(std::move(grid), std::move(v));
}

SpectralCurve sensor_radiance(const Scene& scene, const AtmosphereState& atm) {
  const auto leaving = surface_leaving_radiance(scene, atm);
  auto grid = common_grid({&leaving, &atm.tau_target_sensor, &atm.path_radiance, &atm.adjacency_radiance});
  detail::CurveCursor l(leaving), t2(atm.tau_target_sensor), up(atm.path_radiance),
      adj(atm.adjacency_radiance);
  std::vector<double> v;
  v.reserve(grid.size());
  for (double wl : grid) v.push_back(l(wl) * t2(wl) + up(wl) + adj(wl));
  return SpectralCurve(std::move(grid), std::move(v));
}

SpectralCurve dls_downwelling(const Scene& scene, const AtmosphereState& atm) {
  scene.validate();
  auto grid = common_grid({&atm.exo_irradiance, &atm.tau_space_sensor, &atm.sky_radiance_sensor});
  const double mu = std::cos(scene.solar_zenith_deg * kDegToRad);
  detail::CurveCursor e(atm.exo_irradiance), tp(atm.tau_space_sensor), sky(atm.sky_radiance_sensor);
  std::vector<double> v;
  v.reserve(grid.size());
  for (double wl : grid) v.push_back(e(wl) / kPi * mu * tp(wl) + sky(wl));
  return SpectralCurve(std::move(grid), std::move(v));
}

AtmosphereModel parse_atmosphere_model(std::string_view name) {
  const auto n = text::to_lower(name);
  if (n == "tropical" || n == "1") return AtmosphereModel::tropical;
  if (n == "mid-lat-summer" || n == "mid_latitude_summer" || n == "2") {
    return AtmosphereModel::mid_latitude_summer;
  }
  if (n == "mid-lat-winter" || n == "mid_latitude_winter" || n == "3") {
    return AtmosphereModel::mid_latitude_winter;
  }
  if (n == "us-standard" || n == "us_standard" || n == "6") return AtmosphereModel::us_standard;
  throw ConfigError("unknown atmosphere model '" + std::string(name) + "'");
}

std::string_view to_string(AtmosphereModel model) {
  switch (model) {
    case AtmosphereModel::tropical: return "tropical";
    case AtmosphereModel::mid_latitude_summer: return "mid-lat-summer";
    case AtmosphereModel::mid_latitude_winter: return "mid-lat-winter";
    case AtmosphereModel::us_standard: return "us-standard";
  }
  return "?";
}

AtmosphereParams preset(AtmosphereModel model) {
  // Isotropic scattering returns about half of the removed direct flux
  // downward; the presets vary that share and the aerosol type slightly.
  switch (model) {
    case AtmosphereModel::tropical: return {1.0, 0.55, 2.0, 0.5};
    case AtmosphereModel::mid_latitude_summer: return {1.3, 0.5, 1.5, 0.5};
    case AtmosphereModel::mid_latitude_winter: return {1.5, 0.45, 1.0, 0.5};
    case AtmosphereModel::us_standard: return {1.3, 0.5, 1.5, 0.5};
  }
  return {};
}

double extinction_coefficient(double wavelength_nm, double visibility_km, double angstrom_exponent) {
  if (!(visibility_km > 0.0)) throw InvalidArgument("visibility must be positive");
  if (!(wavelength_nm > 0.0)) throw InvalidArgument("wavelength must be positive");
  return kKoschmieder / visibility_km * std::pow(wavelength_nm / kReferenceWavelengthNm, -angstrom_exponent);
}

double beer_lambert(double extinction_per_km, double path_km) {
  if (path_km < 0.0) throw InvalidArgument("path length must be non-negative");
  return std::exp(-extinction_per_km * path_km);
}

double solar_zenith_deg(int day_of_year, double time_utc_hours, double latitude_deg,
                        double longitude_west_deg) {
  if (day_of_year < 1 || day_of_year > 366) throw InvalidArgument("day of year must be 1..366");
  if (!(time_utc_hours >= 0.0 && time_utc_hours <= 24.0)) throw InvalidArgument("UTC hour must be 0..24");
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) throw InvalidArgument("latitude out of range");
  // NOAA general solar position (fractional-year series).
  const double g = 2.0 * kPi / 365.0 * (day_of_year - 1 + (time_utc_hours - 12.0) / 24.0);
  const double eot_min = 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                                   0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
  const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                      0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                      0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
  const double true_solar_min = time_utc_hours * 60.0 + eot_min - 4.0 * longitude_west_deg;
  const double hour_angle = (true_solar_min / 4.0 - 180.0) * kDegToRad;
  const double lat = latitude_deg * kDegToRad;
  const double cos_zen = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  return std::acos(std::clamp(cos_zen, -1.0, 1.0)) / kDegToRad;
}

ParametricAtmosphere parametric_atmosphere(const AtmosphereConditions& c, const SpectralCurve& exo) {
  return parametric_atmosphere(c, exo, preset(c.model));
}

ParametricAtmosphere parametric_atmosphere(const AtmosphereConditions& c, const SpectralCurve& exo,
                                           const AtmosphereParams& p) {
  if (!(c.visibility_km > 0.0)) throw InvalidArgument("visibility must be positive");
  if (!(c.sensor_altitude_km > c.ground_altitude_km)) throw InvalidArgument("sensor must be above the ground");
  if (!(p.mixing_height_km >= 0.0) || !(p.diffuse_fraction >= 0.0 && p.diffuse_fraction <= 1.0) ||
      !(p.path_coefficient >= 0.0)) {
    throw InvalidArgument("atmosphere parameters out of range");
  }
  if (exo.min_value() < 0.0) throw InvalidArgument("exo irradiance must be non-negative");
  const double zenith = solar_zenith_deg(c.day_of_year, c.time_utc_hours, c.latitude_deg, c.longitude_west_deg);
  if (!(zenith < 90.0)) {
    throw InvalidArgument("sun is below the horizon (zenith " + text::format_double(zenith) + " deg)");
  }
  const double mu = std::cos(zenith * kDegToRad);
  const double height_agl = c.sensor_altitude_km - c.ground_altitude_km;
  // Aerosol column above each level, as a path length through the mixed layer.
  const double column_target = p.mixing_height_km;
  const double column_sensor = std::max(0.0, p.mixing_height_km - height_agl);
  const double view_path = std::min(height_agl, p.mixing_height_km);

  const auto wl = exo.wavelengths();
  const auto e0 = exo.values();
  const std::size_t n = wl.size();
  std::vector<double> t1(n), t2(n), tp(n), sky_t(n), sky_s(n), path(n), zero(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = extinction_coefficient(wl[i], c.visibility_km, p.angstrom_exponent);
    t1[i] = beer_lambert(beta, column_target / mu);
    tp[i] = beer_lambert(beta, column_sensor / mu);
    t2[i] = beer_lambert(beta, view_path);
    const double direct_toa = e0[i] * mu;
    sky_t[i] = p.diffuse_fraction * direct_toa * (1.0 - t1[i]) / kPi;
    sky_s[i] = p.diffuse_fraction * direct_toa * (1.0 - tp[i]) / kPi;
    path[i] = p.path_coefficient * (1.0 - t2[i]) * 0.5 * (sky_t[i] + sky_s[i]);
  }
  std::vector<double> grid(wl.begin(), wl.end());
  ParametricAtmosphere out{
      AtmosphereState{exo, SpectralCurve(grid, t1), SpectralCurve(grid, t2), SpectralCurve(grid, sky_t),
                      SpectralCurve(grid, path), SpectralCurve(grid, zero), SpectralCurve(grid, tp),
                      SpectralCurve(grid, sky_s)},
      zenith};
  return out;
}

void SimulationGrid::validate() const {
  const auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("simulation grid: " + what);
  };
  need(!atmosphere_models.empty() && !days.empty() && !times_utc.empty() && !visibilities_km.empty() &&
           !sensor_altitudes_km.empty(),
       "every swept variable needs at least one value");
  for (int d : days) need(d >= 1 && d <= 366, "day number " + std::to_string(d) + " outside 1..366");
  for (double t : times_utc) need(t >= 0.0 && t <= 24.0, "UTC time " + text::format_double(t) + " outside 0..24");
  for (double v : visibilities_km) need(v > 0.0, "visibility must be positive (got " + text::format_double(v) + ")");
  for (double h : sensor_altitudes_km) {
    need(h > ground_altitude_km, "sensor altitude " + text::format_double(h) + " km is not above the ground");
  }
  need(latitude_deg >= -90.0 && latitude_deg <= 90.0, "latitude out of range");
}

std::size_t SimulationGrid::cell_count() const {
  return atmosphere_models.size() * days.size() * times_utc.size() * visibilities_km.size() *
         sensor_altitudes_km.size();
}

bool SimulationGrid::excluded_from_summary(double sensor_altitude_km) const {
  return std::find(summary_excluded_altitudes_km.begin(), summary_excluded_altitudes_km.end(),
                   sensor_altitude_km) != summary_excluded_altitudes_km.end();
}

std::vector<MaarrRow> evaluate_maarr_cell(const AtmosphereConditions& c, const AtmosphereParams& params,
                                          const RsrSet& rsr, const SpectralCurve& exo,
                                          std::span<const NamedCurve> targets) {
  const auto atm = parametric_atmosphere(c, exo, params);
  const auto white = SpectralCurve::constant(1.0, exo.front_wavelength(), exo.back_wavelength());
  Scene reference{white, std::nullopt, atm.solar_zenith_deg, c.ground_altitude_km, c.sensor_altitude_km,
                  c.visibility_km};
  const auto white_leaving = surface_leaving_radiance(reference, atm.state);
  const auto downwelling = dls_downwelling(reference, atm.state);
  std::array<double, kBandCount> white_band{};
  std::array<double, kBandCount> dls_band{};
  for (int b = 1; b <= kBandCount; ++b) {
    white_band[b - 1] = band_effective(white_leaving, rsr.band(b));
    dls_band[b - 1] = band_effective(downwelling, rsr.band(b));
  }

  std::vector<MaarrRow> rows;
  rows.reserve(targets.size() * kBandCount);
  for (const auto& target : targets) {
    Scene scene{target.curve, std::nullopt, atm.solar_zenith_deg, c.ground_altitude_km, c.sensor_altitude_km,
                c.visibility_km};
    const auto leaving = surface_leaving_radiance(scene, atm.state);
    const auto at_sensor = sensor_radiance(scene, atm.state);
    for (int b = 1; b <= kBandCount; ++b) {
      MaarrRow row;
      row.model = c.model;
      row.day = c.day_of_year;
      row.time_utc = c.time_utc_hours;
      row.visibility_km = c.visibility_km;
      row.sensor_altitude_km = c.sensor_altitude_km;
      row.solar_zenith_deg = atm.solar_zenith_deg;
      row.target = target.name;
      row.band = b;
      row.true_reflectance = band_effective(leaving, rsr.band(b)) / white_band[b - 1];
      row.recovered_reflectance = band_effective(at_sensor, rsr.band(b)) / dls_band[b - 1];
      row.error = signed_error(row.recovered_reflectance, row.true_reflectance);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<MaarrRow> run_maarr_grid(const SimulationGrid& grid, const RsrSet& rsr, const SpectralCurve& exo,
                                     std::span<const NamedCurve> targets, const MaarrOptions& options) {
  grid.validate();
  if (targets.empty()) throw ConfigError("simulation grid: no targets");

  std::vector<AtmosphereConditions> cells;
  cells.reserve(grid.cell_count());
  for (auto model : grid.atmosphere_models)
    for (int day : grid.days)
      for (double t : grid.times_utc)
        for (double vis : grid.visibilities_km)
          for (double alt : grid.sensor_altitudes_km)
            cells.push_back({model, day, t, vis, grid.ground_altitude_km, alt, grid.latitude_deg,
                             grid.longitude_west_deg});

  std::vector<std::vector<MaarrRow>> per_cell(cells.size());
  const auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < cells.size(); i += stride) {
      const auto params = options.params ? *options.params : preset(cells[i].model);
      per_cell[i] = evaluate_maarr_cell(cells[i], params, rsr, exo, targets);
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            work(t, threads);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<MaarrRow> rows;
  rows.reserve(cells.size() * targets.size() * kBandCount);
  for (auto& chunk : per_cell) std::move(chunk.begin(), chunk.end(), std::back_inserter(rows));
  return rows;
}

namespace {

struct Accumulator {
  std::vector<double> errors;
  void add(double e) { errors.push_back(e); }
};

MaarrSummaryRow finish(std::string variable, std::string value, int band, Accumulator& acc) {
  std::vector<double> abs_errors(acc.errors.size());
  std::transform(acc.errors.begin(), acc.errors.end(), abs_errors.begin(), [](double e) { return std::abs(e); });
  const auto s = describe(acc.errors);
  const auto a = describe(abs_errors);
  return {std::move(variable), std::move(value), band, s.mean, s.std_dev, a.mean, a.std_dev, s.n};
}

}  // namespace

std::vector<MaarrSummaryRow> summarize_maarr(std::span<const MaarrRow> rows, const SimulationGrid& grid) {
  // (variable order, value sort key, value text, band) -> errors
  using Key = std::tuple<int, double, std::string, int>;
  std::map<Key, Accumulator> groups;
  static const char* kVariables[] = {"overall", "atmosphere", "day", "time_utc", "visibility_km",
                                     "sensor_altitude_km", "target"};
  for (const auto& r : rows) {
    const bool excluded = grid.excluded_from_summary(r.sensor_altitude_km);
    const std::pair<double, std::string> values[] = {
        {0.0, "all"},
        {static_cast<double>(r.model), std::string(to_string(r.model))},
        {static_cast<double>(r.day), std::to_string(r.day)},
        {r.time_utc, text::format_double(r.time_utc)},
        {r.visibility_km, text::format_double(r.visibility_km)},
        {r.sensor_altitude_km, text::format_double(r.sensor_altitude_km)},
        {0.0, r.target},
    };
    for (int v = 0; v < 7; ++v) {
      if (excluded && v != 5) continue;
      for (int band : {0, r.band}) groups[{v, values[v].first, values[v].second, band}].add(r.error);
    }
  }
  std::vector<MaarrSummaryRow> out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    out.push_back(finish(kVariables[std::get<0>(key)], std::get<2>(key), std::get<3>(key), acc));
  }
  return out;
}

MaarrTrends maarr_trends(std::span<const MaarrRow> rows) {
  // (model, fixed value, swept value) -> |error| sums
  using SliceKey = std::tuple<int, double>;
  std::map<SliceKey, std::map<double, std::pair<double, std::size_t>>> by_altitude;
  std::map<SliceKey, std::map<double, std::pair<double, std::size_t>>> by_visibility;
  for (const auto& r : rows) {
    auto& a = by_altitude[{static_cast<int>(r.model), r.visibility_km}][r.sensor_altitude_km];
    a.first += std::abs(r.error);
    ++a.second;
    auto& v = by_visibility[{static_cast<int>(r.model), r.sensor_altitude_km}][r.visibility_km];
    v.first += std::abs(r.error);
    ++v.second;
  }
  const auto rho = [](const std::map<double, std::pair<double, std::size_t>>& series) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [k, s] : series) {
      x.push_back(k);
      y.push_back(s.first / static_cast<double>(s.second));
    }
    return spearman(x, y);
  };
  MaarrTrends t{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& [k, series] : by_altitude)
    if (series.size() >= 2) t.altitude_min_rho = std::min(t.altitude_min_rho, rho(series));
  for (const auto& [k, series] : by_visibility)
    if (series.size() >= 2) t.visibility_max_rho = std::max(t.visibility_max_rho, rho(series));
  return t;
}

std::filesystem::path default_data_dir() { return std::filesystem::path(UASRAD_DATA_DIR); }

SpectralCurve load_solar_spectrum(const std::filesystem::path& data_dir) {
  return read_curve_csv(data_dir / "solar" / "astm_g173_extraterrestrial.csv");
}

std::vector<NamedCurve> load_targets(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("target directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedCurve> out;
  for (const auto& f : files) out.push_back({f.stem().string(), read_curve_csv(f)});
  return out;
}

}  // namespace uasrad
