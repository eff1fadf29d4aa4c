#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "uasrad/error.hpp"

using namespace uasrad;
using namespace uasrad::cli;

int main(int argc, char** argv) {
  CLI::App app{"Radiometric calibration of multispectral sUAS imagery"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  ConvertOptions convert;
  auto* c = app.add_subcommand("convert", "Raw counts to radiance planes");
  c->add_option("--manifest", convert.manifest, "Flight manifest (JSON)")->required();
  c->add_option("--out", convert.out, "Output directory")->required();

  ReflectOptions reflect;
  std::string method = "aarr";
  std::string selection = "dls";
  std::string statistic = "mean";
  std::string rsr_dir;
  auto* r = app.add_subcommand("reflect", "Radiance to reflectance planes");
  r->add_option("--manifest", reflect.manifest, "Flight manifest, usually written by convert")->required();
  r->add_option("--method", method, "elm1, elm2 or aarr");
  r->add_option("--selection", selection, "Calibration image selection: dls, time or single");
  r->add_option("--out", reflect.out, "Output directory")->required();
  r->add_option("--rsr-dir", rsr_dir, "RSR directory for panel spectra");
  r->add_option("--panel-statistic", statistic, "ROI statistic: mean or median");
  r->add_flag("--pgm", reflect.write_pgm, "Also write scaled 16-bit PGMs");
  r->add_option("--pgm-scale", reflect.pgm_scale, "PGM scale factor")->check(CLI::PositiveNumber);

  SimulateOptions simulate;
  std::string grid_config;
  auto* s = app.add_subcommand("simulate", "M-AARR grid study");
  s->add_option("--grid-config", grid_config, "Grid configuration (JSON); defaults to the reference grid");
  s->add_option("--out", simulate.out, "Output directory")->required();
  s->add_option("--rsr-dir", rsr_dir, "RSR directory");
  std::uint64_t seed = 1;
  s->add_option("--seed", seed, "Accepted for symmetry; the simulator is deterministic");

  EvaluateOptions evaluate;
  std::string eval_out;
  bool sample_std = false;
  auto* e = app.add_subcommand("evaluate", "Error tables from a samples CSV");
  e->add_option("samples", evaluate.samples, "Samples CSV")->required();
  e->add_option("--group-by", evaluate.group_by, "Comma list of band,target,altitude,weather,method");
  e->add_option("--out", eval_out, "Output directory (report to stdout when absent)");
  e->add_flag("--sample-std", sample_std, "Sample instead of population standard deviation");

  RsrOptions rsr;
  std::string run_dir;
  auto* rs = app.add_subcommand("rsr", "Relative spectral response curves");
  rs->add_option("run_dir", run_dir, "Monochromator run directory with run.json");
  rs->add_flag("--gaussian", rsr.gaussian, "Write the Gaussian band models instead");
  rs->add_option("--out", rsr.out, "Output directory")->required();

  NdviOptions nd;
  auto* n = app.add_subcommand("ndvi", "NDVI from red and NIR reflectance planes");
  n->add_option("red", nd.red, "Red reflectance plane")->required();
  n->add_option("nir", nd.nir, "NIR reflectance plane")->required();
  n->add_option("--out", nd.out, "Output plane")->required();

  Tape7Options t7;
  std::string t7_out;
  auto* t = app.add_subcommand("tape7", "Band M-AARR reflectance from two tape7 runs");
  t->add_option("sensor_run", t7.sensor_run, "Run with the sensor above the target")->required();
  t->add_option("reference_run", t7.reference_run, "Run with the reference above the sensor")->required();
  t->add_option("--rsr-dir", rsr_dir, "RSR directory");
  t->add_option("--out", t7_out, "Output CSV (stdout when absent)");

  SynthOptions synth;
  auto* sy = app.add_subcommand("synth", "Write a synthetic test flight");
  sy->add_option("--out", synth.out, "Output directory")->required();
  sy->add_option("--seed", synth.seed, "Scene seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c) {
      convert.threads = threads;
      return cmd_convert(convert, std::cerr);
    }
    if (*r) {
      reflect.method = parse_method(method);
      reflect.selection = parse_selection_mode(selection);
      if (statistic == "mean") {
        reflect.panel_statistic = RoiStatistic::mean;
      } else if (statistic == "median") {
        reflect.panel_statistic = RoiStatistic::median;
      } else {
        throw ConfigError("unknown panel statistic '" + statistic + "'");
      }
      if (!rsr_dir.empty()) reflect.rsr_dir = rsr_dir;
      reflect.threads = threads;
      return cmd_reflect(reflect, std::cerr);
    }
    if (*s) {
      if (!grid_config.empty()) simulate.grid_config = grid_config;
      if (!rsr_dir.empty()) simulate.rsr_dir = rsr_dir;
      simulate.threads = threads;
      return cmd_simulate(simulate, std::cerr);
    }
    if (*e) {
      if (!eval_out.empty()) evaluate.out = eval_out;
      evaluate.sample_std = sample_std;
      return cmd_evaluate(evaluate, std::cout, std::cerr);
    }
    if (*rs) {
      if (!run_dir.empty()) rsr.run_dir = run_dir;
      return cmd_rsr(rsr, std::cerr);
    }
    if (*n) return cmd_ndvi(nd, std::cerr);
    if (*t) {
      if (!rsr_dir.empty()) t7.rsr_dir = rsr_dir;
      if (!t7_out.empty()) t7.out = t7_out;
      return cmd_tape7(t7, std::cout, std::cerr);
    }
    if (*sy) return cmd_synth(synth, std::cerr);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
