#pragma once

// Subcommands of the uasrad tool. Each returns a process exit status.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "uasrad/evaluate.hpp"
#include "uasrad/reflectance.hpp"

namespace uasrad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;
inline constexpr int kExitFailure = 3;

struct ConvertOptions {
  std::filesystem::path manifest;
  std::filesystem::path out;
  unsigned threads = 1;
};
/// Raw counts to radiance planes; writes <out>/manifest.json and convert_log.csv.
int cmd_convert(const ConvertOptions& opt, std::ostream& log);

struct ReflectOptions {
  std::filesystem::path manifest;
  Method method = Method::aarr;
  SelectionMode selection = SelectionMode::dls;
  std::filesystem::path out;
  std::optional<std::filesystem::path> rsr_dir;
  unsigned threads = 1;
  bool write_pgm = false;
  double pgm_scale = 10000.0;
  RoiStatistic panel_statistic = RoiStatistic::mean;
};
/// Radiance to reflectance planes; writes reflect_report.csv.
int cmd_reflect(const ReflectOptions& opt, std::ostream& log);

struct SimulateOptions {
  std::optional<std::filesystem::path> grid_config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> rsr_dir;
  unsigned threads = 1;
};
/// M-AARR grid study; writes maarr_errors.csv and maarr_summary.csv.
int cmd_simulate(const SimulateOptions& opt, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path samples;
  std::string group_by;
  std::optional<std::filesystem::path> out;
  bool sample_std = false;
};
/// Error tables (and ANOVA across methods) from a samples CSV.
int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& log);

struct RsrOptions {
  std::optional<std::filesystem::path> run_dir;
  bool gaussian = false;
  std::filesystem::path out;
};
/// Monochromator runs (or the Gaussian band models) to five RSR CSVs.
int cmd_rsr(const RsrOptions& opt, std::ostream& log);

struct NdviOptions {
  std::filesystem::path red;
  std::filesystem::path nir;
  std::filesystem::path out;
};
int cmd_ndvi(const NdviOptions& opt, std::ostream& log);

struct Tape7Options {
  std::filesystem::path sensor_run;
  std::filesystem::path reference_run;
  std::optional<std::filesystem::path> rsr_dir;
  std::optional<std::filesystem::path> out;
};
/// Band M-AARR reflectance from a sensor-altitude run and a reference run.
int cmd_tape7(const Tape7Options& opt, std::ostream& out, std::ostream& log);

struct SynthOptions {
  std::filesystem::path out;
  std::uint64_t seed = 1;
};
/// Writes a synthetic ten-image flight with its truth table.
int cmd_synth(const SynthOptions& opt, std::ostream& log);

}  // namespace uasrad::cli
