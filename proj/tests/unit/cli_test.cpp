#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "cli/synth.hpp"
#include "oracles.hpp"
#include "uasrad/error.hpp"
#include "uasrad/image_io.hpp"
#include "uasrad/simulate.hpp"

using namespace uasrad;
using namespace uasrad::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string identity_band(const std::string& raw) {
  return R"({"raw": ")" + raw +
         R"(", "metadata": {"a1": 1, "a2": 0, "a3": 0, "gain": 1, "exposure_us": 1, "dark_level": 0}})";
}

std::string one_image_manifest(const std::string& raw_prefix) {
  std::string bands;
  for (int b = 1; b <= 5; ++b) bands += (b > 1 ? "," : "") + identity_band(raw_prefix + std::to_string(b) + ".pgm");
  return R"({"images": [{"id": "one", "timestamp": 0, "bands": [)" + bands + "]}]}";
}

double roi_mean(const fs::path& plane, const Roi& roi) {
  const auto d = io::read_plane(plane);
  double s = 0.0;
  for (std::size_t y = roi.y; y < roi.y + roi.height; ++y)
    for (std::size_t x = roi.x; x < roi.x + roi.width; ++x) s += d.pixels[y * d.info.width + x];
  return s / static_cast<double>(roi.width * roi.height);
}

}  // namespace

TEST_CASE("manifest parsing") {
  const auto dir = oracle::scratch_dir("manifest");
  SUBCASE("exposure in seconds is refused") {
    const std::string text =
        R"({"images": [{"id": "a", "timestamp": 0, "bands": [{"raw": "x.pgm", "metadata": {"a1": 1, "a2": 0, "a3": 0, "gain": 1, "exposure_s": 0.001}}]}]})";
    CHECK_THROWS_AS(parse_manifest(text, dir), ConfigError);
  }
  SUBCASE("four bands are refused") {
    std::string bands;
    for (int b = 1; b <= 4; ++b) bands += (b > 1 ? "," : "") + identity_band("x.pgm");
    CHECK_THROWS_AS(parse_manifest(R"({"images": [{"id": "a", "timestamp": 0, "bands": [)" + bands + "]}]}", dir),
                    ConfigError);
  }
  SUBCASE("unknown calibration panel") {
    std::string bands;
    for (int b = 1; b <= 5; ++b) bands += (b > 1 ? "," : "") + identity_band("x.pgm");
    const auto text = R"({"images": [{"id": "a", "timestamp": 0, "bands": [)" + bands +
                      R"(], "calibration": {"bright": {"panel": "white", "roi": [0, 0, 2, 2]}}}]})";
    CHECK_THROWS_AS(parse_manifest(text, dir), ConfigError);
  }
  SUBCASE("round trip") {
    const auto flight = generate_synthetic_flight(dir / "flight");
    const auto m = load_manifest(flight.manifest);
    CHECK(m.images.size() == 10);
    CHECK(dump_manifest(parse_manifest(dump_manifest(m), m.base_dir)) == dump_manifest(m));
  }
}

TEST_CASE("convert") {
  const auto dir = oracle::scratch_dir("convert");
  std::ostringstream log;
  SUBCASE("empty image list") {
    write_text(dir / "empty.json", R"({"images": []})");
    CHECK(cmd_convert({dir / "empty.json", dir / "out"}, log) == kExitOk);
    CHECK(log.str().find("warning") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "radiance"));
  }
  SUBCASE("identity metadata gives counts over 2^N") {
    const std::vector<std::uint16_t> px{0, 2048, 65535, 17};
    for (int b = 1; b <= 5; ++b) io::write_pgm(dir / ("raw_" + std::to_string(b) + ".pgm"), RawImage(2, 2, b, 16, px));
    write_text(dir / "m.json", one_image_manifest("raw_"));
    CHECK(cmd_convert({dir / "m.json", dir / "out"}, log) == kExitOk);
    const auto plane = io::read_plane(dir / "out" / "radiance" / "one_nir.f32");
    CHECK(plane.info.band_index == 5);
    for (std::size_t i = 0; i < px.size(); ++i) {
      CHECK(plane.pixels[i] == static_cast<double>(static_cast<float>(px[i] / 65536.0)));
    }
    const auto updated = load_manifest(dir / "out" / "manifest.json");
    CHECK(updated.images[0].bands[4].radiance.value() == "radiance/one_nir.f32");
  }
  SUBCASE("corrupt PGM is a partial failure") {
    const std::vector<std::uint16_t> px{1, 2, 3, 4};
    for (int b = 1; b <= 5; ++b) io::write_pgm(dir / ("raw_" + std::to_string(b) + ".pgm"), RawImage(2, 2, b, 16, px));
    write_text(dir / "bad_3.pgm", "P2\n2 2\n255\n1 2 3 4\n");
    std::string good_bands, bad_bands;
    for (int b = 1; b <= 5; ++b) {
      good_bands += (b > 1 ? "," : "") + identity_band("raw_" + std::to_string(b) + ".pgm");
      bad_bands += (b > 1 ? "," : "") + identity_band((b == 3 ? "bad_" : "raw_") + std::to_string(b) + ".pgm");
    }
    write_text(dir / "m.json", R"({"images": [{"id": "good", "timestamp": 0, "bands": [)" + good_bands +
                                   R"(]}, {"id": "bad", "timestamp": 1, "bands": [)" + bad_bands + "]}]}");
    CHECK(cmd_convert({dir / "m.json", dir / "out"}, log) == kExitPartial);
    CHECK(log.str().find("image 'bad' band red") != std::string::npos);
    CHECK(slurp(dir / "out" / "convert_log.csv").find("bad,red,error") != std::string::npos);
  }
  SUBCASE("invalid gain is named per image") {
    const std::vector<std::uint16_t> px{1, 2, 3, 4};
    for (int b = 1; b <= 5; ++b) io::write_pgm(dir / ("raw_" + std::to_string(b) + ".pgm"), RawImage(2, 2, b, 16, px));
    auto text = one_image_manifest("raw_");
    text.replace(text.find("\"gain\": 1"), 9, "\"gain\": 3");
    write_text(dir / "m.json", text);
    CHECK(cmd_convert({dir / "m.json", dir / "out"}, log) == kExitFailure);
    CHECK(log.str().find("image 'one'") != std::string::npos);
  }
  SUBCASE("missing manifest is a usage error") {
    CHECK(cmd_convert({dir / "nope.json", dir / "out"}, log) == kExitUsage);
  }
}

TEST_CASE("reflect on the synthetic flight") {
  const auto dir = oracle::scratch_dir("reflect");
  const auto flight = generate_synthetic_flight(dir / "flight");
  std::ostringstream log;
  REQUIRE(cmd_convert({flight.manifest, dir / "conv", 1}, log) == kExitOk);
  const auto manifest = dir / "conv" / "manifest.json";

  SUBCASE("elm2 on the calibration image recovers its panels") {
    ReflectOptions o;
    o.manifest = manifest;
    o.method = Method::elm2;
    o.selection = SelectionMode::single;
    o.out = dir / "elm2";
    REQUIRE(cmd_reflect(o, log) == kExitOk);
    for (const auto& t : flight.truth) {
      if (t.image_id != "cal_1" || t.panel_id == "check") continue;
      for (int b = 1; b <= kBandCount; ++b) {
        const auto plane = o.out / "reflectance" / ("cal_1_" + std::string(kCameraBands[b - 1].name) + ".f32");
        CHECK(roi_mean(plane, t.roi) == doctest::Approx(t.reflectance[b - 1]).epsilon(1e-6));
      }
    }
  }
  SUBCASE("dls selection logs the closer candidate") {
    ReflectOptions o;
    o.manifest = manifest;
    o.method = Method::elm1;
    o.selection = SelectionMode::dls;
    o.out = dir / "elm1";
    REQUIRE(cmd_reflect(o, log) == kExitOk);
    const auto report = slurp(o.out / "reflect_report.csv");
    CHECK(report.find("img_3,blue,elm1,dls,cal_1,") != std::string::npos);
    CHECK(report.find("cal_2,blue,elm1,dls,cal_2,0,0,") != std::string::npos);
  }
  SUBCASE("aarr and idempotence") {
    ReflectOptions o;
    o.manifest = manifest;
    o.method = Method::aarr;
    o.out = dir / "aarr";
    o.write_pgm = true;
    o.threads = 3;
    REQUIRE(cmd_reflect(o, log) == kExitOk);
    const auto first = slurp(o.out / "reflectance" / "img_5_green.f32");
    const auto first_report = slurp(o.out / "reflect_report.csv");
    o.threads = 1;
    REQUIRE(cmd_reflect(o, log) == kExitOk);
    CHECK(slurp(o.out / "reflectance" / "img_5_green.f32") == first);
    CHECK(slurp(o.out / "reflect_report.csv") == first_report);
    const auto pgm = io::read_pgm(o.out / "reflectance" / "img_5_green.pgm", 2);
    CHECK(pgm.at(10, 10) == 5000);
  }
  SUBCASE("missing dark panel for elm2") {
    auto m = load_manifest(manifest);
    for (auto& img : m.images)
      if (img.calibration) img.calibration->dark.reset();
    save_manifest(dir / "conv" / "no_dark.json", m);
    ReflectOptions o;
    o.manifest = dir / "conv" / "no_dark.json";
    o.method = Method::elm2;
    o.out = dir / "nodark";
    CHECK(cmd_reflect(o, log) == kExitUsage);
  }
}

TEST_CASE("aarr with a white panel scene gives 1") {
  const auto dir = oracle::scratch_dir("white");
  // Identity camera: L = counts / 65536; DLS irradiance pi * L.
  const std::vector<std::uint16_t> px(16, 6554);
  for (int b = 1; b <= 5; ++b) io::write_pgm(dir / ("w_" + std::to_string(b) + ".pgm"), RawImage(4, 4, b, 16, px));
  auto text = one_image_manifest("w_");
  const double e = 6554.0 / 65536.0 * 3.141592653589793;
  const auto es = std::to_string(e);
  text.insert(text.rfind("]}]}") + 1,
              R"(, "dls": {"irradiance": [)" + es + "," + es + "," + es + "," + es + "," + es + "]}");
  write_text(dir / "m.json", text);
  std::ostringstream log;
  ReflectOptions o;
  o.manifest = dir / "m.json";
  o.method = Method::aarr;
  o.out = dir / "out";
  REQUIRE(cmd_reflect(o, log) == kExitOk);
  CHECK(roi_mean(o.out / "reflectance" / "one_red.f32", {0, 0, 4, 4}) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("simulate command") {
  const auto dir = oracle::scratch_dir("simulate");
  std::ostringstream log;
  SUBCASE("single cell") {
    write_text(dir / "grid.json", R"({"atmosphere_models": ["tropical"], "days": [171], "times_utc": [16],
      "visibilities_km": [23], "sensor_altitudes_km": [0.282], "targets": ["grass"]})");
    REQUIRE(cmd_simulate({dir / "grid.json", dir / "out"}, log) == kExitOk);
    const auto table = slurp(dir / "out" / "maarr_errors.csv");
    CHECK(count_lines(table) == 1 + kBandCount);
    CHECK(table.find("tropical,171,16,23,0.282,") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "maarr_summary.csv"));
  }
  SUBCASE("zero visibility") {
    write_text(dir / "grid.json", R"({"visibilities_km": [0]})");
    CHECK(cmd_simulate({dir / "grid.json", dir / "out"}, log) == kExitUsage);
  }
  SUBCASE("unknown key") {
    write_text(dir / "grid.json", R"({"visibility": [5]})");
    CHECK(cmd_simulate({dir / "grid.json", dir / "out"}, log) == kExitUsage);
  }
  SUBCASE("default grid footprint and determinism") {
    REQUIRE(cmd_simulate({std::nullopt, dir / "a", std::nullopt, 2}, log) == kExitOk);
    const auto a = slurp(dir / "a" / "maarr_errors.csv");
    CHECK(count_lines(a) == 1 + 1920 * 6 * kBandCount);
    REQUIRE(cmd_simulate({std::nullopt, dir / "b", std::nullopt, 1}, log) == kExitOk);
    CHECK(slurp(dir / "b" / "maarr_errors.csv") == a);
    CHECK(slurp(dir / "b" / "maarr_summary.csv") == slurp(dir / "a" / "maarr_summary.csv"));
  }
}

TEST_CASE("evaluate command") {
  const auto dir = oracle::scratch_dir("evaluate");
  write_text(dir / "samples.csv",
             "target_id,band,weather,altitude_ft,method,true_reflectance,estimated_reflectance\n"
             "grass,1,sunny,375,elm1,0.05,0.06\n"
             "grass,1,sunny,375,elm2,0.05,0.045\n"
             "grass,1,sunny,375,aarr,0.05,0.03\n"
             "asphalt,5,cloudy,150,elm1,0.12,0.13\n"
             "asphalt,5,cloudy,150,elm2,0.12,0.125\n"
             "asphalt,5,cloudy,150,aarr,0.12,0.09\n");
  std::ostringstream out, log;
  REQUIRE(cmd_evaluate({dir / "samples.csv", "method", dir / "out"}, out, log) == kExitOk);
  const auto table = slurp(dir / "out" / "table_method.csv");
  CHECK(table.starts_with("error,elm1,elm2,aarr\n"));
  CHECK(count_lines(table) == 5);
  CHECK(slurp(dir / "out" / "report.csv").starts_with("method,mean_signed,"));
  CHECK(fs::exists(dir / "out" / "anova.csv"));

  REQUIRE(cmd_evaluate({dir / "samples.csv", "band,method"}, out, log) == kExitOk);
  CHECK(out.str().starts_with("band,method,mean_signed"));
  CHECK(cmd_evaluate({dir / "samples.csv", "colour"}, out, log) == kExitUsage);
}

TEST_CASE("rsr command") {
  const auto dir = oracle::scratch_dir("rsr_cmd");
  std::ostringstream log;
  REQUIRE(cmd_rsr({std::nullopt, true, dir / "gauss"}, log) == kExitOk);
  CHECK(load_rsr_dir(dir / "gauss").band(3) == gaussian_rsr_set().band(3));

  // Band 2 counts are proportional to the lamp power: nothing survives the pedestal.
  std::string run = R"({"bands": [)";
  for (int b = 1; b <= 5; ++b) {
    std::ostringstream csv;
    csv << "wavelength_nm,mean_counts,power_w\n";
    for (int i = 0; i < 11; ++i) {
      const double wl = 400.0 + 2.0 * i;
      const double power = 1.0 + 0.1 * i;
      const double counts = b == 2 ? 50.0 * power : (i == 5 ? 900.0 : (i == 4 || i == 6 ? 400.0 : 20.0)) * power;
      csv << wl << ',' << counts << ',' << power << '\n';
    }
    write_text(dir / "run" / ("band_" + std::to_string(b) + ".csv"), csv.str());
    run += (b > 1 ? "," : "") + std::string(R"({"file": "band_)") + std::to_string(b) +
           R"(.csv", "gain": 1, "exposure_us": 500})";
  }
  write_text(dir / "run" / "run.json", run + "]}");
  CHECK(cmd_rsr({dir / "run", false, dir / "out"}, log) == kExitPartial);
  CHECK(log.str().find("green RSR is all zero (degenerate)") != std::string::npos);
  const auto blue = read_curve_csv(dir / "out" / rsr_file_name(1));
  CHECK(blue.max_value() == 1.0);
  CHECK(blue.value_at(410.0) == 1.0);
  CHECK(read_curve_csv(dir / "out" / rsr_file_name(2)).max_value() == 0.0);
}

TEST_CASE("ndvi command") {
  const auto dir = oracle::scratch_dir("ndvi_cmd");
  io::write_plane(dir / "red.f32", {3, 2, 3, io::kReflectanceUnits}, std::vector<double>(6, 0.0264));
  io::write_plane(dir / "nir.f32", {3, 2, 5, io::kReflectanceUnits}, std::vector<double>(6, 0.4912));
  std::ostringstream log;
  REQUIRE(cmd_ndvi({dir / "red.f32", dir / "nir.f32", dir / "ndvi.f32"}, log) == kExitOk);
  const auto out = io::read_plane(dir / "ndvi.f32");
  CHECK(out.info.band_index == 0);
  for (double v : out.pixels) CHECK(v == doctest::Approx(0.8980).epsilon(5e-4 / 0.898));
  io::write_plane(dir / "small.f32", {2, 2, 5, io::kReflectanceUnits}, std::vector<double>(4, 0.4));
  CHECK(cmd_ndvi({dir / "red.f32", dir / "small.f32", dir / "x.f32"}, log) == kExitFailure);
}

TEST_CASE("tape7 command") {
  const auto dir = oracle::scratch_dir("tape7_cmd");
  std::ostringstream sensor, reference;
  sensor << " WAVLEN_NM TOTAL_RAD GRND_RFLT\n";
  reference << " WAVLEN_NM TOTAL_RAD GRND_RFLT\n";
  for (int wl = 380; wl <= 1000; wl += 5) {
    sensor << wl << " 0.012 0.009\n";
    reference << wl << " 0.05 0.04\n";
  }
  write_text(dir / "sensor.scn", sensor.str());
  write_text(dir / "reference.scn", reference.str());
  std::ostringstream out, log;
  REQUIRE(cmd_tape7({dir / "sensor.scn", dir / "reference.scn"}, out, log) == kExitOk);
  INFO(out.str());
  const auto text = out.str();
  const auto row = text.find("\nblue,");
  REQUIRE(row != std::string::npos);
  std::istringstream fields(text.substr(row + 6, text.find('\n', row + 1) - row - 6));
  std::string cell;
  std::vector<double> v;
  while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(0.012).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(0.3).epsilon(1e-12));
}
