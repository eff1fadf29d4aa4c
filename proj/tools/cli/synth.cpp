#include "synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "manifest.hpp"
#include "uasrad/error.hpp"
#include "uasrad/image_io.hpp"
#include "uasrad/radiance.hpp"
#include "uasrad/rsr.hpp"
#include "uasrad/text.hpp"

namespace uasrad::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Illumination {
  BandVector irradiance;  // level-sensor irradiance, W/m^2/nm
  double solar_elevation_deg;
};

constexpr Illumination kMorning{{1.21, 1.43, 1.30, 1.12, 0.94}, 55.0};
constexpr Illumination kOvercast{{0.52, 0.58, 0.49, 0.41, 0.33}, 38.0};

constexpr double kBright = 0.5;
constexpr double kDark = 0.1;
constexpr double kCheck = 0.3;
constexpr double kTargetBrightCounts = 45000.0;

RadiometricMetadata band_metadata(int band, const SynthFlightOptions& o) {
  RadiometricMetadata m;
  m.band_index = band;
  m.gain = band == 5 ? 2 : 1;
  m.exposure_us = 800.0 + 100.0 * band;
  m.dark_level = 96.0 + band;
  m.a2 = 0.08;
  m.a3 = 2e-6;
  m.bits_per_pixel = 16;
  m.vignette.center_x = o.width * 0.52;
  m.vignette.center_y = o.height * 0.47;
  m.vignette.coefficients = {1.2e-4, 2.5e-5, -1.0e-7, 2.0e-10, 0.0, 0.0};
  // Bright panel under the brighter illumination lands near kTargetBrightCounts.
  const double l_bright = kBright * kMorning.irradiance[band - 1] / kPi;
  m.a1 = l_bright * m.gain * m.exposure_us * 65536.0 / kTargetBrightCounts;
  return m;
}

DlsRecord tilted_reading(const Illumination& illum, double sun_sensor_deg, double timestamp) {
  DlsRecord d;
  d.solar_elevation_deg = illum.solar_elevation_deg;
  d.sun_sensor_angle_deg = sun_sensor_deg;
  d.fresnel_factor = 0.98;
  d.diffuse_ratio = kDefaultDiffuseRatio;
  d.timestamp = timestamp;
  const double num = d.diffuse_ratio + std::sin(illum.solar_elevation_deg * kPi / 180.0);
  const double den = d.fresnel_factor * (d.diffuse_ratio + std::cos(sun_sensor_deg * kPi / 180.0));
  for (std::size_t b = 0; b < kBandCount; ++b) d.raw_irradiance[b] = illum.irradiance[b] * den / num;
  return d;
}

void write_flat_spectrum(const std::filesystem::path& path, double value) {
  write_curve_csv(path, SpectralCurve::constant(value, 330.0, 1200.0), "reflectance");
}

}  // namespace

SynthFlight generate_synthetic_flight(const std::filesystem::path& dir, const SynthFlightOptions& o) {
  if (o.width < 104 || o.height < 40) throw InvalidArgument("synthetic flight needs at least 104x40 pixels");
  std::filesystem::create_directories(dir / "raw");
  std::filesystem::create_directories(dir / "panels");
  write_flat_spectrum(dir / "panels" / "bright.csv", kBright);
  write_flat_spectrum(dir / "panels" / "dark.csv", kDark);
  write_rsr_dir(dir / "rsr", gaussian_rsr_set());

  const Roi bright_roi{8, 8, 24, 24};
  const Roi dark_roi{40, 8, 24, 24};
  const Roi check_roi{72, 8, 24, 24};

  struct Frame {
    std::string id;
    double timestamp;
    const Illumination* illum;
    double sun_sensor_deg;
    bool calibration;
    bool designated;
  };
  std::vector<Frame> frames{{"cal_1", 1000.0, &kMorning, 36.0, true, true},
                            {"cal_2", 52000.0, &kOvercast, 51.0, true, false}};
  for (int i = 0; i < 8; ++i) {
    frames.push_back({"img_" + std::to_string(i + 1), 1010.0 + 12.0 * i, &kMorning, 30.0 + 1.5 * i, false, false});
  }

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> background(0.05, 0.6);

  FlightManifest m;
  m.base_dir = dir;
  m.flight = {"synthetic", "2026-01-01", "sunny", 375};
  m.rsr_dir = "rsr";
  m.panels["bright"] = PanelSpec{"panels/bright.csv", std::nullopt};
  m.panels["dark"] = PanelSpec{"panels/dark.csv", std::nullopt};

  SynthFlight flight;
  flight.manifest = dir / "manifest.json";
  const auto inside = [](const Roi& r, std::size_t x, std::size_t y) {
    return x >= r.x && x < r.x + r.width && y >= r.y && y < r.y + r.height;
  };
  for (const auto& f : frames) {
    ImageEntry e;
    e.id = f.id;
    e.timestamp = f.timestamp;
    e.dls = tilted_reading(*f.illum, f.sun_sensor_deg, f.timestamp);
    std::vector<double> scene(o.width * o.height);
    for (auto& v : scene) v = background(rng);
    for (int b = 1; b <= static_cast<int>(kBandCount); ++b) {
      const auto meta = band_metadata(b, o);
      const double e_band = f.illum->irradiance[b - 1];
      std::vector<double> radiance(scene.size());
      for (std::size_t y = 0; y < o.height; ++y) {
        for (std::size_t x = 0; x < o.width; ++x) {
          double rho = scene[y * o.width + x] * (0.8 + 0.05 * b);
          if (inside(bright_roi, x, y)) rho = kBright;
          if (inside(dark_roi, x, y)) rho = kDark;
          if (inside(check_roi, x, y)) rho = kCheck;
          radiance[y * o.width + x] = rho * e_band / kPi;
        }
      }
      const auto raw = quantize_radiance(RadianceImage(o.width, o.height, b, std::move(radiance)), meta);
      const auto name = f.id + "_" + std::string(kCameraBands[b - 1].name) + ".pgm";
      io::write_pgm(dir / "raw" / name, raw);
      e.bands.push_back(BandEntry{"raw/" + name, std::nullopt, meta});
    }
    if (f.calibration) {
      e.calibration = CalibrationEntry{f.designated, PanelRef{"bright", bright_roi}, PanelRef{"dark", dark_roi}};
      flight.calibration_images.push_back(f.id);
    } else {
      flight.field_images.push_back(f.id);
    }
    for (const auto& [panel, roi, rho] : {std::tuple{"bright", bright_roi, kBright}, std::tuple{"dark", dark_roi, kDark},
                                          std::tuple{"check", check_roi, kCheck}}) {
      PanelTruth t{f.id, panel, roi, {}};
      t.reflectance.fill(rho);
      flight.truth.push_back(t);
    }
    m.images.push_back(std::move(e));
  }
  save_manifest(flight.manifest, m);

  std::ofstream truth(dir / "truth.csv");
  truth << "image_id,panel_id,x,y,width,height,band,reflectance\n";
  for (const auto& t : flight.truth) {
    for (std::size_t b = 0; b < kBandCount; ++b) {
      truth << t.image_id << ',' << t.panel_id << ',' << t.roi.x << ',' << t.roi.y << ',' << t.roi.width << ','
            << t.roi.height << ',' << kCameraBands[b].name << ',' << text::format_double(t.reflectance[b]) << '\n';
    }
  }
  return flight;
}

}  // namespace uasrad::cli
