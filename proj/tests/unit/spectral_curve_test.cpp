#include <cmath>
#include <doctest.h>

#include <sstream>

#include "uasrad/error.hpp"
#include "uasrad/spectral_curve.hpp"

using uasrad::SpectralCurve;

TEST_CASE("curve construction rejects bad tables") {
  CHECK_THROWS_AS(SpectralCurve({500.0}, {1.0}), uasrad::InvalidArgument);
  CHECK_THROWS_AS(SpectralCurve({500.0, 500.0}, {1.0, 2.0}), uasrad::InvalidArgument);
  CHECK_THROWS_AS(SpectralCurve({510.0, 500.0}, {1.0, 2.0}), uasrad::InvalidArgument);
  CHECK_THROWS_AS(SpectralCurve({500.0, 510.0}, {1.0}), uasrad::DimensionError);
  CHECK_THROWS_AS(SpectralCurve({500.0, 510.0}, {1.0, std::nan("")}), uasrad::InvalidArgument);
}

TEST_CASE("interpolation is linear inside and zero outside") {
  const SpectralCurve c({400.0, 500.0, 600.0}, {0.0, 1.0, 3.0});
  CHECK(c.value_at(450.0) == doctest::Approx(0.5));
  CHECK(c.value_at(550.0) == doctest::Approx(2.0));
  CHECK(c.value_at(600.0) == 3.0);
  CHECK(c.value_at(399.0) == 0.0);
  CHECK(c.value_at(601.0) == 0.0);
  const double grid[] = {350.0, 400.0, 525.0, 700.0};
  const auto r = c.resample(grid);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == doctest::Approx(1.5));
  CHECK(r[3] == 0.0);
}

TEST_CASE("union grid merges and clips") {
  const double a[] = {400.0, 450.0, 500.0};
  const double b[] = {425.0, 450.0, 600.0};
  const auto g = uasrad::union_grid(a, b, 410.0, 550.0);
  const std::vector<double> want{410.0, 425.0, 450.0, 500.0, 550.0};
  CHECK(g == want);
}

TEST_CASE("curve CSV round trip is exact") {
  const SpectralCurve c({330.0, 331.5, 1200.0}, {0.1, 1.0 / 3.0, 2.5e-7});
  std::stringstream ss;
  uasrad::write_curve_csv(ss, c, "value");
  CHECK(ss.str().starts_with("wavelength_nm,value\n"));
  const auto back = uasrad::read_curve_csv(ss);
  CHECK(back == c);
}

TEST_CASE("curve CSV errors carry the line number") {
  std::stringstream ss("wavelength_nm,value\n400,1\n410,abc\n");
  try {
    uasrad::read_curve_csv(ss);
    FAIL("expected a format error");
  } catch (const uasrad::FormatError& e) {
    CHECK(e.line() == 3);
  }
  std::stringstream no_header("400,1\n410,2\n");
  CHECK_THROWS_AS(uasrad::read_curve_csv(no_header), uasrad::FormatError);
}
