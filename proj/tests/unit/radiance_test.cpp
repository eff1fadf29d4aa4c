#include <doctest.h>

#include <cmath>
#include <random>

#include "uasrad/error.hpp"
#include "uasrad/radiance.hpp"

using namespace uasrad;

namespace {

RadiometricMetadata identity_meta() {
  RadiometricMetadata m;
  m.a1 = 1.0;
  m.gain = 1;
  m.exposure_us = 1.0;
  m.bits_per_pixel = 16;
  return m;
}

}  // namespace

TEST_CASE("vignette_factor") {
  VignetteModel v{640.0, 480.0, {0.1, 0, 0, 0, 0, 0}};
  CHECK(vignette_factor(v, 640.0, 480.0) == 1.0);
  CHECK(vignette_factor(v, 643.0, 484.0) == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
  CHECK(vignette_factor(VignetteModel{640.0, 480.0, {}}, 3.0, 9.0) == 1.0);

  VignetteModel bad{0.0, 0.0, {-0.5, 0, 0, 0, 0, 0}};
  try {
    vignette_factor(bad, 3.0, 4.0);
    FAIL("expected a metadata error");
  } catch (const MetadataError& e) {
    CHECK(std::string(e.what()).find("(3, 4)") != std::string::npos);
  }
}

TEST_CASE("vignette_factor is radially symmetric") {
  VignetteModel v{10.0, 20.0, {1e-3, -2e-5, 3e-7, 1e-9, -1e-11, 1e-13}};
  const double a = vignette_factor(v, 13.0, 24.0);
  CHECK(vignette_factor(v, 7.0, 24.0) == a);
  CHECK(vignette_factor(v, 13.0, 16.0) == a);
  CHECK(vignette_factor(v, 7.0, 16.0) == a);
}

TEST_CASE("row_correction") {
  auto m = identity_meta();
  CHECK(row_correction(m, 77.0) == 1.0);
  m.a3 = 0.001;
  CHECK(row_correction(m, 100.0) == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
  m.a3 = 0.0;
  m.a2 = 100.0;
  m.exposure_us = 100000.0;
  CHECK(row_correction(m, 100.0) == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
  m.a2 = 0.0;
  m.a3 = -0.02;
  CHECK_THROWS_AS(row_correction(m, 100.0), MetadataError);
}

TEST_CASE("metadata validation") {
  auto m = identity_meta();
  CHECK_NOTHROW(m.validate());
  m.gain = 3;
  CHECK_THROWS_AS(m.validate(), MetadataError);
  m = identity_meta();
  m.exposure_us = 0.0;
  CHECK_THROWS_AS(m.validate(), MetadataError);
  m = identity_meta();
  m.dark_level = -1.0;
  CHECK_THROWS_AS(m.validate(), MetadataError);
}

TEST_CASE("dc_to_radiance examples") {
  const auto m = identity_meta();
  SUBCASE("2048 counts") {
    const auto l = dc_to_radiance(RawImage(1, 1, 1, 16, {2048}), m);
    CHECK(l.pixels()[0] == 0.03125);
    CHECK(l.clamp_count() == 0);
  }
  SUBCASE("dark level and clamping") {
    auto md = m;
    md.dark_level = 100.0;
    const auto l = dc_to_radiance(RawImage(3, 1, 1, 16, {100, 50, 200}), md);
    CHECK(l.pixels()[0] == 0.0);
    CHECK(l.pixels()[1] == 0.0);
    CHECK(l.clamp_count() == 1);
    CHECK(l.pixels()[2] == 100.0 / 65536.0);
  }
  SUBCASE("band mismatch") {
    CHECK_THROWS_AS(dc_to_radiance(RawImage(1, 1, 2, 16, {1}), m), DimensionError);
  }
  SUBCASE("bits beyond the metadata depth") {
    auto m12 = m;
    m12.bits_per_pixel = 12;
    CHECK_THROWS(dc_to_radiance(RawImage(1, 1, 1, 16, {5000}), m12));
  }
}

TEST_CASE("dc_to_radiance linearity and monotonicity") {
  RadiometricMetadata m = identity_meta();
  m.a1 = 3.3e2;
  m.a2 = 0.05;
  m.a3 = 1e-6;
  m.gain = 2;
  m.exposure_us = 1200.0;
  m.vignette = {16.0, 8.0, {2e-4, 1e-5, 0, 0, 0, 0}};
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 20000);
  std::vector<std::uint16_t> px(32 * 16);
  for (auto& p : px) p = static_cast<std::uint16_t>(d(rng));
  std::vector<std::uint16_t> px3(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) px3[i] = static_cast<std::uint16_t>(3 * px[i]);
  const auto l1 = dc_to_radiance(RawImage(32, 16, 1, 16, px), m);
  const auto l3 = dc_to_radiance(RawImage(32, 16, 1, 16, px3), m);
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(l3.pixels()[i] == doctest::Approx(3.0 * l1.pixels()[i]).epsilon(1e-14));

  std::vector<std::uint16_t> bumped(px);
  for (auto& p : bumped) p = static_cast<std::uint16_t>(p + 1);
  const auto lb = dc_to_radiance(RawImage(32, 16, 1, 16, bumped), m);
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(lb.pixels()[i] > l1.pixels()[i]);
}

TEST_CASE("radiance_to_counts inverts dc_to_radiance") {
  RadiometricMetadata m = identity_meta();
  m.a1 = 250.0;
  m.a2 = 0.1;
  m.a3 = 3e-6;
  m.gain = 4;
  m.exposure_us = 700.0;
  m.dark_level = 512.0;
  m.vignette = {40.0, 30.0, {5e-4, -2e-6, 1e-7, 0, 0, 0}};
  std::vector<std::uint16_t> px(80 * 60);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint16_t>(600 + (i * 7919) % 60000);
  const RawImage raw(80, 60, 1, 16, px);
  const auto counts = radiance_to_counts(dc_to_radiance(raw, m), m);
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(std::abs(counts[i] - px[i]) < 1e-6);
  const auto again = quantize_radiance(dc_to_radiance(raw, m), m);
  for (std::size_t i = 0; i < px.size(); ++i) CHECK(again.pixels()[i] == px[i]);
}
