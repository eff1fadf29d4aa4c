#include "commands.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "manifest.hpp"
#include "synth.hpp"
#include "uasrad/error.hpp"
#include "uasrad/image_io.hpp"
#include "uasrad/radiance.hpp"
#include "uasrad/rsr.hpp"
#include "uasrad/simulate.hpp"
#include "uasrad/tape7.hpp"
#include "uasrad/text.hpp"

namespace uasrad::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions escape
/// from the lowest index that threw.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int batch_status(std::size_t failed, std::size_t total) {
  if (failed == 0) return kExitOk;
  return failed == total ? kExitFailure : kExitPartial;
}

std::string band_name(int band) { return std::string(kCameraBands[band - 1].name); }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

RsrSet load_rsr(const std::optional<fs::path>& flag, const std::optional<fs::path>& configured) {
  const fs::path dir = flag ? *flag : configured ? *configured : default_data_dir() / "rsr";
  try {
    return load_rsr_dir(dir);
  } catch (const Error& e) {
    throw ConfigError("RSR set in " + dir.string() + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// convert

int cmd_convert(const ConvertOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    auto m = load_manifest(opt.manifest);
    if (m.images.empty()) {
      log << "warning: manifest lists no images; nothing to convert\n";
      return kExitOk;
    }
    fs::create_directories(opt.out / "radiance");

    struct BandResult {
      std::string status = "ok";
      std::size_t clamped = 0;
      std::string message;
      std::optional<std::string> plane;
    };
    std::vector<std::array<BandResult, kBandCount>> results(m.images.size());
    parallel_for(m.images.size(), opt.threads, [&](std::size_t i) {
      const auto& img = m.images[i];
      for (int b = 1; b <= kBandCount; ++b) {
        auto& r = results[i][b - 1];
        try {
          const auto& entry = img.bands[b - 1];
          const auto raw = io::read_pgm(m.resolve(entry.raw), b);
          const auto rad = dc_to_radiance(raw, entry.metadata);
          const auto rel = fs::path("radiance") / (img.id + "_" + band_name(b) + ".f32");
          io::write_plane(opt.out / rel, {rad.width(), rad.height(), b, io::kRadianceUnits}, rad.pixels());
          r.clamped = rad.clamp_count();
          r.plane = rel.generic_string();
        } catch (const std::exception& e) {
          r.status = "error";
          r.message = e.what();
        }
      }
    });

    auto log_csv = open_out(opt.out / "convert_log.csv");
    log_csv << "image_id,band,status,clamped_pixels,message\n";
    std::size_t failed = 0;
    FlightManifest updated = m;
    updated.base_dir = opt.out;
    for (std::size_t i = 0; i < m.images.size(); ++i) {
      bool ok = true;
      for (int b = 1; b <= kBandCount; ++b) {
        const auto& r = results[i][b - 1];
        log_csv << csv_field(m.images[i].id) << ',' << band_name(b) << ',' << r.status << ',' << r.clamped << ','
                << csv_field(r.message) << '\n';
        auto& entry = updated.images[i].bands[b - 1];
        entry.raw = fs::relative(m.resolve(entry.raw), opt.out).generic_string();
        entry.radiance = r.plane;
        if (r.status != "ok") {
          ok = false;
          log << "error: image '" << m.images[i].id << "' band " << band_name(b) << ": " << r.message << '\n';
        }
      }
      if (!ok) ++failed;
    }
    for (auto& [id, panel] : updated.panels) {
      if (panel.spectrum) panel.spectrum = fs::relative(m.resolve(*panel.spectrum), opt.out).generic_string();
    }
    if (updated.rsr_dir) updated.rsr_dir = fs::relative(m.resolve(*updated.rsr_dir), opt.out).generic_string();
    save_manifest(opt.out / "manifest.json", updated);
    log << "converted " << (m.images.size() - failed) << " of " << m.images.size() << " images\n";
    return batch_status(failed, m.images.size());
  });
}

// ---------------------------------------------------------------------------
// reflect

namespace {

std::vector<RadianceImage> image_radiance(const FlightManifest& m, const ImageEntry& img) {
  std::vector<RadianceImage> planes;
  for (int b = 1; b <= kBandCount; ++b) {
    const auto& entry = img.bands[b - 1];
    if (entry.radiance) {
      auto plane = io::read_radiance_plane(m.resolve(*entry.radiance));
      if (plane.band_index() != b) {
        throw FormatError("radiance plane " + *entry.radiance + " is band " + std::to_string(plane.band_index()) +
                          ", expected " + std::to_string(b));
      }
      planes.push_back(std::move(plane));
    } else {
      planes.push_back(dc_to_radiance(io::read_pgm(m.resolve(entry.raw), b), entry.metadata));
    }
  }
  return planes;
}

BandVector panel_reflectance(const FlightManifest& m, const std::string& panel_id,
                             const std::function<const RsrSet&()>& rsr) {
  const auto& spec = m.panels.at(panel_id);
  if (spec.band_reflectance) return *spec.band_reflectance;
  const auto curve = read_curve_csv(m.resolve(*spec.spectrum));
  BandVector out{};
  for (int b = 1; b <= kBandCount; ++b) out[b - 1] = band_effective(curve, rsr().band(b));
  return out;
}

PanelObservation observe(const FlightManifest& m, const PanelRef& ref, const std::vector<RadianceImage>& planes,
                         RoiStatistic stat, const std::function<const RsrSet&()>& rsr) {
  PanelObservation p;
  p.panel_id = ref.panel_id;
  p.roi = ref.roi;
  p.ground_reflectance = panel_reflectance(m, ref.panel_id, rsr);
  for (int b = 1; b <= kBandCount; ++b) p.mean_radiance[b - 1] = extract_panel(planes[b - 1], ref.roi, stat);
  p.validate();
  return p;
}

}  // namespace

int cmd_reflect(const ReflectOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    const auto m = load_manifest(opt.manifest);
    if (m.images.empty()) {
      log << "warning: manifest lists no images; nothing to do\n";
      return kExitOk;
    }
    std::optional<RsrSet> rsr_cache;
    const std::function<const RsrSet&()> rsr = [&]() -> const RsrSet& {
      if (!rsr_cache) {
        rsr_cache = load_rsr(opt.rsr_dir, m.rsr_dir ? std::optional<fs::path>(m.resolve(*m.rsr_dir)) : std::nullopt);
      }
      return *rsr_cache;
    };

    std::vector<CalibrationImage> candidates;
    if (opt.method != Method::aarr) {
      for (const auto& img : m.images) {
        if (!img.calibration) continue;
        if (opt.method == Method::elm2 && !img.calibration->dark) continue;
        if (opt.selection == SelectionMode::dls && !img.dls) {
          throw ConfigError("calibration image '" + img.id + "' has no DLS record (needed for --selection dls)");
        }
        const auto planes = image_radiance(m, img);
        CalibrationImage c;
        c.image_id = img.id;
        c.timestamp = img.timestamp;
        c.designated = img.calibration->designated;
        c.dls = img.dls.value_or(DlsRecord{});
        c.bright = observe(m, img.calibration->bright, planes, opt.panel_statistic, rsr);
        if (img.calibration->dark) c.dark = observe(m, *img.calibration->dark, planes, opt.panel_statistic, rsr);
        candidates.push_back(std::move(c));
      }
      if (candidates.empty()) {
        throw ConfigError(opt.method == Method::elm2 ? "no calibration image with a dark panel for elm2"
                                                     : "no calibration images in the manifest");
      }
    }
    std::vector<std::optional<ElmModel>> models(candidates.size());
    const auto model_for = [&](std::size_t i) -> const ElmModel& {
      if (!models[i]) {
        models[i] = opt.method == Method::elm1 ? fit_elm_1pt(candidates[i]) : fit_elm_2pt(candidates[i]);
      }
      return *models[i];
    };
    for (std::size_t i = 0; i < candidates.size(); ++i) model_for(i);  // fit up front, single-threaded

    fs::create_directories(opt.out / "reflectance");
    struct ImageResult {
      std::string calibration;
      std::optional<Selection> selection;
      BandVector out_of_range{};
      std::string status = "ok";
      std::string message;
    };
    std::vector<ImageResult> results(m.images.size());
    parallel_for(m.images.size(), opt.threads, [&](std::size_t i) {
      const auto& img = m.images[i];
      auto& r = results[i];
      try {
        const auto planes = image_radiance(m, img);
        std::optional<ElmModel> model;
        if (opt.method != Method::aarr) {
          if (opt.selection == SelectionMode::dls && !img.dls) throw CalibrationError("no DLS record for selection");
          const auto sel =
              select_calibration(img.dls.value_or(DlsRecord{}), candidates, opt.selection, img.timestamp);
          r.selection = sel;
          r.calibration = candidates[sel.index].image_id;
          model = *models[sel.index];
        } else if (!img.dls) {
          throw CalibrationError("missing DLS record");
        }
        for (int b = 1; b <= kBandCount; ++b) {
          const auto refl = model ? apply_elm(*model, planes[b - 1]) : aarr(planes[b - 1], *img.dls);
          r.out_of_range[b - 1] = refl.out_of_range_fraction();
          const auto stem = img.id + "_" + band_name(b);
          io::write_plane(opt.out / "reflectance" / (stem + ".f32"),
                          {refl.width(), refl.height(), b, io::kReflectanceUnits}, refl.pixels());
          if (opt.write_pgm) {
            io::write_pgm(opt.out / "reflectance" / (stem + ".pgm"),
                          RawImage(refl.width(), refl.height(), b, 16, io::scale_to_u16(refl.pixels(), opt.pgm_scale)));
          }
        }
      } catch (const std::exception& e) {
        r.status = "error";
        r.message = e.what();
      }
    });

    auto report = open_out(opt.out / "reflect_report.csv");
    report << "image_id,band,method,selection,calibration_image,dls_distance,time_delta_s,out_of_range_fraction,"
              "status,message\n";
    std::size_t failed = 0;
    for (std::size_t i = 0; i < m.images.size(); ++i) {
      const auto& r = results[i];
      if (r.status != "ok") {
        ++failed;
        log << "error: image '" << m.images[i].id << "': " << r.message << '\n';
      }
      for (int b = 1; b <= kBandCount; ++b) {
        report << csv_field(m.images[i].id) << ',' << band_name(b) << ',' << to_string(opt.method) << ','
               << (opt.method == Method::aarr ? "" : std::string(to_string(opt.selection))) << ','
               << csv_field(r.calibration) << ','
               << (r.selection ? text::format_double(r.selection->dls_distance) : "") << ','
               << (r.selection ? text::format_double(r.selection->time_delta) : "") << ','
               << (r.status == "ok" ? text::format_double(r.out_of_range[b - 1]) : "") << ',' << r.status << ','
               << csv_field(r.message) << '\n';
      }
    }
    log << "reflectance written for " << (m.images.size() - failed) << " of " << m.images.size() << " images\n";
    return batch_status(failed, m.images.size());
  });
}

// ---------------------------------------------------------------------------
// simulate

namespace {

struct GridConfig {
  SimulationGrid grid;
  std::vector<NamedCurve> targets;
  std::optional<AtmosphereParams> params;
  fs::path solar_spectrum = default_data_dir() / "solar" / "astm_g173_extraterrestrial.csv";
  std::optional<fs::path> rsr_dir;
};

[[noreturn]] void grid_fail(const std::string& key, const std::string& what) {
  throw ConfigError("grid config '" + key + "': " + what);
}

template <class T>
std::vector<T> list_of(const Json& v, const std::string& key) {
  if (!v.is_array()) grid_fail(key, "expected an array");
  std::vector<T> out;
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, int>) {
      if (!x.is_number_integer()) grid_fail(key, "expected integers");
    } else {
      if (!x.is_number()) grid_fail(key, "expected numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

double scalar(const Json& v, const std::string& key) {
  if (!v.is_number()) grid_fail(key, "expected a number");
  return v.get<double>();
}

GridConfig load_grid_config(const std::optional<fs::path>& path) {
  GridConfig cfg;
  const fs::path data = default_data_dir();
  fs::path targets_dir = data / "targets";
  std::optional<std::vector<std::string>> target_names;
  std::vector<NamedCurve> target_files;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open grid config " + path->string());
    Json root;
    try {
      root = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("grid config is not valid JSON: ") + e.what());
    }
    if (root.contains("simulation")) root = root["simulation"];
    if (!root.is_object()) throw ConfigError("grid config: expected an object");
    const fs::path base = path->parent_path();
    const auto rel = [&](const Json& v, const std::string& key) {
      if (!v.is_string()) grid_fail(key, "expected a path");
      const fs::path p(v.get<std::string>());
      return p.is_absolute() ? p : base / p;
    };
    auto& g = cfg.grid;
    for (const auto& [key, v] : root.items()) {
      if (key == "atmosphere_models") {
        if (!v.is_array()) grid_fail(key, "expected an array of names");
        g.atmosphere_models.clear();
        for (const auto& x : v) {
          if (!x.is_string()) grid_fail(key, "expected names");
          g.atmosphere_models.push_back(parse_atmosphere_model(x.get<std::string>()));
        }
      } else if (key == "days") {
        g.days = list_of<int>(v, key);
      } else if (key == "times_utc") {
        g.times_utc = list_of<double>(v, key);
      } else if (key == "visibilities_km") {
        g.visibilities_km = list_of<double>(v, key);
      } else if (key == "sensor_altitudes_km") {
        g.sensor_altitudes_km = list_of<double>(v, key);
      } else if (key == "summary_excluded_altitudes_km") {
        g.summary_excluded_altitudes_km = list_of<double>(v, key);
      } else if (key == "ground_altitude_km") {
        g.ground_altitude_km = scalar(v, key);
      } else if (key == "latitude_deg") {
        g.latitude_deg = scalar(v, key);
      } else if (key == "longitude_west_deg") {
        g.longitude_west_deg = scalar(v, key);
      } else if (key == "surface_temperature_k") {
        g.surface_temperature_k = scalar(v, key);
      } else if (key == "solar_spectrum") {
        cfg.solar_spectrum = rel(v, key);
      } else if (key == "rsr_dir") {
        cfg.rsr_dir = rel(v, key);
      } else if (key == "targets_dir") {
        targets_dir = rel(v, key);
      } else if (key == "targets") {
        if (!v.is_array()) grid_fail(key, "expected an array");
        target_names.emplace();
        for (const auto& t : v) {
          if (t.is_string()) {
            target_names->push_back(t.get<std::string>());
          } else if (t.is_object() && t.contains("name") && t.contains("spectrum")) {
            target_files.push_back({t["name"].get<std::string>(), read_curve_csv(rel(t["spectrum"], key))});
          } else {
            grid_fail(key, "expected target names or {\"name\", \"spectrum\"} objects");
          }
        }
      } else if (key == "atmosphere_params") {
        AtmosphereParams p;
        if (!v.is_object()) grid_fail(key, "expected an object");
        for (const auto& [pk, pv] : v.items()) {
          const auto k = key + "." + pk;
          if (pk == "angstrom_exponent") {
            p.angstrom_exponent = scalar(pv, k);
          } else if (pk == "diffuse_fraction") {
            p.diffuse_fraction = scalar(pv, k);
          } else if (pk == "mixing_height_km") {
            p.mixing_height_km = scalar(pv, k);
          } else if (pk == "path_coefficient") {
            p.path_coefficient = scalar(pv, k);
          } else {
            grid_fail(k, "unknown key");
          }
        }
        cfg.params = p;
      } else {
        grid_fail(key, "unknown key");
      }
    }
  }
  cfg.grid.validate();
  if (target_names || !target_files.empty()) {
    for (const auto& name : target_names.value_or(std::vector<std::string>{})) {
      const auto p = targets_dir / (name + ".csv");
      if (!fs::exists(p)) throw ConfigError("grid config 'targets': no spectrum for '" + name + "' in " + targets_dir.string());
      cfg.targets.push_back({name, read_curve_csv(p)});
    }
    for (auto& t : target_files) cfg.targets.push_back(std::move(t));
  } else {
    cfg.targets = load_targets(targets_dir);
  }
  if (cfg.targets.empty()) throw ConfigError("grid config: no targets");
  return cfg;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    const auto cfg = load_grid_config(opt.grid_config);
    const auto rsr = load_rsr(opt.rsr_dir, cfg.rsr_dir);
    const auto exo = read_curve_csv(cfg.solar_spectrum);
    const auto rows = run_maarr_grid(cfg.grid, rsr, exo, cfg.targets, {opt.threads, cfg.params});

    auto errors = open_out(opt.out / "maarr_errors.csv");
    errors << "atmosphere,day,time_utc,visibility_km,sensor_altitude_km,solar_zenith_deg,target,band,"
              "true_reflectance,recovered_reflectance,signed_error\n";
    for (const auto& r : rows) {
      errors << to_string(r.model) << ',' << r.day << ',' << text::format_double(r.time_utc) << ','
             << text::format_double(r.visibility_km) << ',' << text::format_double(r.sensor_altitude_km) << ','
             << text::format_double(r.solar_zenith_deg) << ',' << csv_field(r.target) << ',' << band_name(r.band)
             << ',' << text::format_double(r.true_reflectance) << ',' << text::format_double(r.recovered_reflectance)
             << ',' << text::format_double(r.error) << '\n';
    }
    const auto summary = summarize_maarr(rows, cfg.grid);
    auto sum = open_out(opt.out / "maarr_summary.csv");
    sum << "variable,value,band,mean_signed,std_signed,mean_absolute,std_absolute,n\n";
    for (const auto& s : summary) {
      sum << s.variable << ',' << csv_field(s.value) << ',' << (s.band == 0 ? "all" : band_name(s.band)) << ','
          << text::format_double(s.mean_signed) << ',' << text::format_double(s.std_signed) << ','
          << text::format_double(s.mean_absolute) << ',' << text::format_double(s.std_absolute) << ',' << s.n
          << '\n';
    }
    log << "simulated " << cfg.grid.cell_count() << " cells x " << cfg.targets.size() << " targets x " << kBandCount
        << " bands = " << rows.size() << " rows\n";
    for (const auto& s : summary) {
      if (s.variable == "overall" && s.band == 0) {
        log << "overall signed error " << text::format_double(s.mean_signed) << " (std "
            << text::format_double(s.std_signed) << "), mean |error| " << text::format_double(s.mean_absolute)
            << '\n';
      }
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const auto group_by = parse_group_by(opt.group_by);
    std::vector<TargetSample> samples;
    try {
      samples = read_samples_csv(opt.samples);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (samples.empty()) throw ConfigError("samples file has no rows");
    const auto kind = opt.sample_std ? StdKind::sample : StdKind::population;
    const auto reports = aggregate(samples, group_by, kind);

    std::map<Method, std::vector<double>> by_method;
    for (const auto& s : samples) by_method[s.method].push_back(s.error());
    std::vector<std::vector<double>> groups;
    for (auto& [method, errs] : by_method) groups.push_back(errs);
    const bool anova_ok = groups.size() >= 2 && std::all_of(groups.begin(), groups.end(),
                                                            [](const auto& g) { return g.size() >= 2; });

    if (!opt.out) {
      write_reports_csv(out, reports, group_by);
      return kExitOk;
    }
    fs::create_directories(*opt.out);
    {
      auto f = open_out(*opt.out / "report.csv");
      write_reports_csv(f, reports, group_by);
    }
    {
      auto f = open_out(*opt.out / "table_method.csv");
      write_method_table_csv(f, samples, kind);
    }
    {
      auto f = open_out(*opt.out / "table_band.csv");
      write_band_table_csv(f, samples, kind);
    }
    if (anova_ok) {
      const auto a = anova_oneway(groups);
      auto f = open_out(*opt.out / "anova.csv");
      f << "source,ss,df,ms,f,p\n";
      f << "between," << text::format_double(a.ss_between) << ',' << a.df_between << ','
        << text::format_double(a.ss_between / a.df_between) << ',' << text::format_double(a.f) << ','
        << text::format_double(a.p) << '\n';
      f << "within," << text::format_double(a.ss_within) << ',' << a.df_within << ','
        << text::format_double(a.ss_within / a.df_within) << ",,\n";
      log << "anova across methods: F = " << text::format_double(a.f) << ", p = " << text::format_double(a.p)
          << '\n';
    } else {
      log << "anova skipped: needs at least 2 methods with 2 samples each\n";
    }
    log << "evaluated " << samples.size() << " samples in " << reports.size() << " groups\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// rsr

int cmd_rsr(const RsrOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    if (opt.gaussian == opt.run_dir.has_value()) throw ConfigError("rsr: give either a run directory or --gaussian");
    if (opt.gaussian) {
      write_rsr_dir(opt.out, gaussian_rsr_set());
      log << "wrote Gaussian band models to " << opt.out.string() << '\n';
      return kExitOk;
    }
    const fs::path run_json = *opt.run_dir / "run.json";
    std::ifstream in(run_json);
    if (!in) throw ConfigError("rsr: cannot open " + run_json.string());
    Json root;
    try {
      root = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("rsr: run.json is not valid JSON: ") + e.what());
    }
    const double scale = root.value("scale", kRsrScale);
    if (!root.contains("bands") || !root["bands"].is_array() || root["bands"].size() != kBandCount) {
      throw ConfigError("rsr: run.json needs 'bands' with 5 entries");
    }
    fs::create_directories(opt.out);
    std::size_t degenerate = 0;
    for (int b = 1; b <= kBandCount; ++b) {
      const auto& e = root["bands"][b - 1];
      if (!e.contains("file") || !e.contains("gain") || !e.contains("exposure_us")) {
        throw ConfigError("rsr: band " + std::to_string(b) + " needs file, gain and exposure_us");
      }
      // Three columns: wavelength_nm, mean_counts, power_w.
      std::ifstream data(*opt.run_dir / e["file"].get<std::string>());
      if (!data) throw ConfigError("rsr: cannot open " + e["file"].get<std::string>());
      MonochromatorRun run;
      run.gain = e["gain"].get<double>();
      run.exposure_us = e["exposure_us"].get<double>();
      std::string line;
      std::size_t line_no = 0;
      bool header = false;
      while (std::getline(data, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header) {
          header = true;
          continue;
        }
        const auto f = text::split(t, ',');
        if (f.size() != 3) throw FormatError("rsr: expected wavelength_nm,mean_counts,power_w", line_no);
        run.wavelengths_nm.push_back(text::parse_double(f[0], line_no));
        run.mean_counts.push_back(text::parse_double(f[1], line_no));
        run.power_w.push_back(text::parse_double(f[2], line_no));
      }
      const auto norm = normalize_counts(run);
      const auto power = SpectralCurve(run.wavelengths_nm, run.power_w);
      const auto rel = relative_response(norm, power, scale);
      SpectralCurve curve = rel.curve;
      if (rel.degenerate) {
        ++degenerate;
        log << "warning: band " << band_name(b) << " RSR is all zero (degenerate)\n";
      } else {
        curve = peak_normalize(rel.curve);
      }
      write_curve_csv(opt.out / rsr_file_name(b), curve, "rsr");
    }
    return degenerate == 0 ? kExitOk : batch_status(degenerate, kBandCount);
  });
}

// ---------------------------------------------------------------------------
// ndvi

int cmd_ndvi(const NdviOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    const auto red = io::read_reflectance_plane(opt.red);
    const auto nir = io::read_reflectance_plane(opt.nir);
    const auto out = ndvi(red, nir);
    if (opt.out.has_parent_path()) fs::create_directories(opt.out.parent_path());
    io::write_plane(opt.out, {out.width(), out.height(), 0, "ndvi"}, out.pixels());
    log << "ndvi: " << out.width() << "x" << out.height() << ", " << out.zero_denominator_count()
        << " zero-denominator pixels\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// tape7

int cmd_tape7(const Tape7Options& opt, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const auto sensor = ingest_tape7(opt.sensor_run);
    const auto reference = ingest_tape7(opt.reference_run);
    const auto rsr = load_rsr(opt.rsr_dir, std::nullopt);
    const auto total = sensor.total_radiance_curve();
    const auto ground = reference.ground_reflected_curve();
    std::ostringstream csv;
    csv << "band,sensor_radiance,reference_radiance,reflectance\n";
    for (int b = 1; b <= kBandCount; ++b) {
      const double ls = band_effective(total, rsr.band(b));
      const double lr = band_effective(ground, rsr.band(b));
      if (!(lr > 0.0)) throw CalibrationError("tape7: zero reference radiance in band " + band_name(b));
      csv << band_name(b) << ',' << text::format_double(ls) << ',' << text::format_double(lr) << ','
          << text::format_double(ls / lr) << '\n';
    }
    if (opt.out) {
      open_out(*opt.out) << csv.str();
    } else {
      out << csv.str();
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const SynthOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    SynthFlightOptions o;
    o.seed = opt.seed;
    const auto f = generate_synthetic_flight(opt.out, o);
    log << "synthetic flight: " << f.calibration_images.size() << " calibration + " << f.field_images.size()
        << " field images in " << opt.out.string() << '\n';
    return kExitOk;
  });
}

}  // namespace uasrad::cli
