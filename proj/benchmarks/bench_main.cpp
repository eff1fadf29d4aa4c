#include <benchmark/benchmark.h>

#include <random>

#include "uasrad/radiance.hpp"
#include "uasrad/reflectance.hpp"
#include "uasrad/rsr.hpp"
#include "uasrad/simulate.hpp"

using namespace uasrad;

namespace {

RawImage random_raw(std::size_t w, std::size_t h) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dn(0, 65535);
  std::vector<std::uint16_t> px(w * h);
  for (auto& p : px) p = static_cast<std::uint16_t>(dn(rng));
  return RawImage(w, h, 1, 16, std::move(px));
}

RadiometricMetadata camera_metadata() {
  RadiometricMetadata m;
  m.a1 = 3e-4;
  m.a2 = 1e-3;
  m.a3 = 2e-7;
  m.gain = 2;
  m.exposure_us = 800.0;
  m.dark_level = 3000.0;
  m.vignette = {640.0, 480.0, {1e-4, 2e-7, -1e-10, 1e-13, 0.0, 0.0}};
  return m;
}

void BM_DcToRadiance(benchmark::State& state) {
  const auto raw = random_raw(1280, 960);
  const auto meta = camera_metadata();
  for (auto _ : state) benchmark::DoNotOptimize(dc_to_radiance(raw, meta));
  state.SetItemsProcessed(state.iterations() * 1280 * 960);
}
BENCHMARK(BM_DcToRadiance)->Unit(benchmark::kMillisecond);

void BM_Aarr(benchmark::State& state) {
  const auto radiance = dc_to_radiance(random_raw(1280, 960), camera_metadata());
  DlsRecord dls;
  dls.raw_irradiance.fill(1.2);
  dls.solar_elevation_deg = 50.0;
  dls.sun_sensor_angle_deg = 42.0;
  dls.fresnel_factor = 0.98;
  for (auto _ : state) benchmark::DoNotOptimize(aarr(radiance, dls));
}
BENCHMARK(BM_Aarr)->Unit(benchmark::kMillisecond);

void BM_BandEffective(benchmark::State& state) {
  const auto solar = load_solar_spectrum();
  const auto rsr = gaussian_rsr_set();
  for (auto _ : state) {
    for (int b = 1; b <= kBandCount; ++b) benchmark::DoNotOptimize(band_effective(solar, rsr.band(b)));
  }
}
BENCHMARK(BM_BandEffective);

void BM_MaarrCell(benchmark::State& state) {
  const auto data = default_data_dir();
  const auto rsr = load_rsr_dir(data / "rsr");
  const auto exo = load_solar_spectrum(data);
  const auto targets = load_targets(data / "targets");
  const AtmosphereConditions c;
  const auto params = preset(c.model);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_maarr_cell(c, params, rsr, exo, targets));
}
BENCHMARK(BM_MaarrCell)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
