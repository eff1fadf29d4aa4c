#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uasrad/error.hpp"
#include "uasrad/reflectance.hpp"

using namespace uasrad;

namespace {

CalibrationImage panel_image(double rho_b, double l_b, std::optional<std::pair<double, double>> dark = {}) {
  CalibrationImage c;
  c.image_id = "cal";
  c.bright.panel_id = "bright";
  c.bright.ground_reflectance.fill(rho_b);
  c.bright.mean_radiance.fill(l_b);
  if (dark) {
    PanelObservation d;
    d.panel_id = "dark";
    d.ground_reflectance.fill(dark->first);
    d.mean_radiance.fill(dark->second);
    c.dark = d;
  }
  return c;
}

DlsRecord level(BandVector e, double ts = 0.0) {
  DlsRecord d;
  d.raw_irradiance = e;
  d.solar_elevation_deg = 90.0;
  d.sun_sensor_angle_deg = 0.0;
  d.timestamp = ts;
  return d;
}

}  // namespace

TEST_CASE("dls_correct") {
  DlsRecord d;
  d.raw_irradiance = {1.0, 1.0, 1.0, 1.0, 1.0};
  d.solar_elevation_deg = 30.0;
  d.sun_sensor_angle_deg = 45.0;
  const auto e = dls_correct(d);
  for (double v : e) CHECK(v == doctest::Approx(0.7627932967086907).epsilon(1e-13));

  d.raw_irradiance = {};
  for (double v : dls_correct(d)) CHECK(v == 0.0);

  d.diffuse_ratio = 0.0;
  d.sun_sensor_angle_deg = 120.0;
  CHECK_THROWS_AS(dls_correct(d), CalibrationError);
}

TEST_CASE("dls_correct is the identity for an upright sensor") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    DlsRecord d;
    for (auto& v : d.raw_irradiance) v = 2.0 * u(rng);
    d.solar_elevation_deg = 90.0 * u(rng);
    d.sun_sensor_angle_deg = 90.0 - d.solar_elevation_deg;
    d.diffuse_ratio = u(rng);
    CHECK(dls_correct(d) == d.raw_irradiance);
  }
}

TEST_CASE("irradiance_to_radiance and dls_distance") {
  const auto r = irradiance_to_radiance({std::numbers::pi, 0.0, 0.62832, 1.0, 2.0});
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == doctest::Approx(0.2).epsilon(1e-5));
  CHECK(dls_distance({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}) == 0.0);
  CHECK(dls_distance({1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}) == 1.0);
  CHECK(dls_distance({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5.5}) == 0.5);
}

TEST_CASE("select_calibration examples") {
  std::vector<CalibrationImage> cands(2, panel_image(0.5, 1.0));
  cands[0].image_id = "far";
  cands[0].dls = level({1, 2, 3, 4, 6}, 100.0);
  cands[0].timestamp = 100.0;
  cands[1].image_id = "near";
  cands[1].dls = level({1, 2, 3, 4, 5.5}, 200.0);
  cands[1].timestamp = 200.0;
  const auto image = level({1, 2, 3, 4, 5});

  const auto s = select_calibration(image, cands, SelectionMode::dls, 0.0);
  CHECK(s.index == 1);
  CHECK(s.dls_distance == doctest::Approx(0.5));
  const auto t = select_calibration(image, cands, SelectionMode::time, 160.0);
  CHECK(cands[t.index].timestamp == 200.0);
  CHECK(t.time_delta == 40.0);

  // One candidate: any mode picks it.
  const std::span<const CalibrationImage> one(cands.data(), 1);
  for (auto mode : {SelectionMode::dls, SelectionMode::time, SelectionMode::single}) {
    CHECK(select_calibration(image, one, mode, 5.0).index == 0);
  }

  // Single mode: the designated image, else the earliest.
  CHECK(select_calibration(image, cands, SelectionMode::single, 0.0).index == 0);
  cands[1].designated = true;
  CHECK(select_calibration(image, cands, SelectionMode::single, 0.0).index == 1);
  cands[0].designated = true;
  CHECK_THROWS_AS(select_calibration(image, cands, SelectionMode::single, 0.0), CalibrationError);

  CHECK_THROWS_AS(select_calibration(image, std::span<const CalibrationImage>{}, SelectionMode::dls, 0.0),
                  CalibrationError);
  CHECK(parse_selection_mode("time") == SelectionMode::time);
  CHECK_THROWS_AS(parse_selection_mode("nearest"), ConfigError);
}

TEST_CASE("selection ties go to the earliest, then the smallest id") {
  std::vector<CalibrationImage> cands(3, panel_image(0.5, 1.0));
  cands[0].image_id = "b";
  cands[0].timestamp = 50.0;
  cands[1].image_id = "a";
  cands[1].timestamp = 50.0;
  cands[2].image_id = "c";
  cands[2].timestamp = 150.0;
  for (auto& c : cands) c.dls = level({1, 1, 1, 1, 1});
  const auto image = level({1, 1, 1, 1, 1});
  CHECK(cands[select_calibration(image, cands, SelectionMode::dls, 0.0).index].image_id == "a");
  CHECK(cands[select_calibration(image, cands, SelectionMode::time, 100.0).index].image_id == "a");
}

TEST_CASE("fit_elm_1pt") {
  auto m = fit_elm_1pt(panel_image(0.30, 60.0));
  CHECK(m.slope[0] == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(m.bias[0] == 0.0);
  CHECK(fit_elm_1pt(panel_image(0.5, 0.25)).slope[2] == 2.0);
  CHECK(fit_elm_1pt(panel_image(0.42, 0.42)).slope[4] == 1.0);
  auto zero = panel_image(0.5, 1.0);
  zero.bright.mean_radiance[3] = 0.0;
  CHECK_THROWS_AS(fit_elm_1pt(zero), CalibrationError);
}

TEST_CASE("fit_elm_2pt and apply_elm") {
  const auto m = fit_elm_2pt(panel_image(0.30, 60.0, std::pair{0.03, 8.0}));
  CHECK(m.slope[0] == doctest::Approx(0.005192307692307692).epsilon(1e-13));
  CHECK(m.bias[0] == doctest::Approx(-0.011538461538461553).epsilon(1e-12));
  const auto out = apply_elm(m, RadianceImage(1, 1, 1, {30.0}));
  CHECK(out.pixels()[0] == doctest::Approx(0.14423076923076922).epsilon(1e-13));

  const auto id = fit_elm_2pt(panel_image(1.0, 1.0, std::pair{0.2, 0.2}));
  CHECK(id.slope[1] == 1.0);
  CHECK(id.bias[1] == 0.0);
  const auto same = apply_elm(id, RadianceImage(2, 1, 2, {0.3, 0.7}));
  CHECK(same.pixels()[0] == 0.3);
  CHECK(same.pixels()[1] == 0.7);

  auto degenerate = panel_image(0.3, 5.0, std::pair{0.03, 5.0});
  try {
    fit_elm_2pt(degenerate);
    FAIL("expected a degenerate-panels error");
  } catch (const CalibrationError& e) {
    CHECK(std::string(e.what()).find("blue") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_elm_2pt(panel_image(0.3, 5.0)), CalibrationError);
}

TEST_CASE("apply_elm is affine and unclamped") {
  const auto m = fit_elm_2pt(panel_image(0.30, 60.0, std::pair{0.03, 8.0}));
  const auto a = apply_elm(m, RadianceImage(3, 1, 1, {1.0, 10.0, 100.0}));
  const auto b = apply_elm(m, RadianceImage(3, 1, 1, {2.0, 20.0, 200.0}));
  const double l[] = {1.0, 10.0, 100.0};
  for (int i = 0; i < 3; ++i) CHECK(b.pixels()[i] - a.pixels()[i] == doctest::Approx(m.slope[0] * l[i]));
  CHECK(a.pixels()[0] < 0.0);
  CHECK(a.out_of_range_fraction() == doctest::Approx(1.0 / 3.0));
  CHECK(apply_elm(fit_elm_1pt(panel_image(0.3, 60.0)), RadianceImage(1, 1, 1, {0.0})).pixels()[0] == 0.0);
}

TEST_CASE("aarr") {
  DlsRecord d = level({0.62832, 0.62832, 0.62832, 0.62832, 0.62832});
  const auto r = aarr(RadianceImage(2, 1, 3, {0.05, 0.0}), d);
  CHECK(r.pixels()[0] == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(r.pixels()[1] == 0.0);

  d = level({std::numbers::pi * 0.2, 1, 1, 1, 1});
  const auto white = aarr(RadianceImage(2, 2, 1, {0.2, 0.2, 0.2, 0.2}), d);
  for (double v : white.pixels()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  d = level({1, 1, 0, 1, 1});
  CHECK_THROWS_AS(aarr(RadianceImage(1, 1, 3, {0.1}), d), CalibrationError);
}

TEST_CASE("extract_panel") {
  const RadianceImage img(4, 2, 1, {1, 3, 5, 7, 2, 4, 6, 8});
  CHECK(extract_panel(img, {0, 0, 2, 1}) == 2.0);
  CHECK(extract_panel(img, {0, 0, 4, 2}) == 4.5);
  CHECK(extract_panel(img, {1, 0, 3, 2}, RoiStatistic::median) == 5.5);
  CHECK(extract_panel(RadianceImage(3, 3, 1, std::vector<double>(9, 0.7)), {1, 1, 2, 2}) == doctest::Approx(0.7));
  CHECK_THROWS_AS(extract_panel(img, {3, 0, 2, 1}), InvalidArgument);
  CHECK_THROWS_AS(extract_panel(img, {0, 0, 0, 1}), InvalidArgument);
}

TEST_CASE("record validation") {
  DlsRecord d;
  d.solar_elevation_deg = 95.0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  d = DlsRecord{};
  d.raw_irradiance[2] = -1.0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  PanelObservation p;
  p.ground_reflectance.fill(1.6);
  p.mean_radiance.fill(1.0);
  CHECK_THROWS_AS(p.validate(), CalibrationError);
}
