#pragma once

// Flight manifest: JSON binding of raw band files, per-band radiometric
// metadata, DLS readings and calibration panels. See docs/manifest.md.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uasrad/radiance.hpp"
#include "uasrad/reflectance.hpp"

namespace uasrad::cli {

struct FlightInfo {
  std::string id;
  std::string date;
  std::string weather;
  std::optional<int> altitude_ft;
};

struct BandEntry {
  std::string raw;                       // 16-bit PGM, relative to the manifest
  std::optional<std::string> radiance;   // float32 plane written by convert
  RadiometricMetadata metadata;
};

struct PanelRef {
  std::string panel_id;
  Roi roi;
};

struct CalibrationEntry {
  bool designated = false;
  PanelRef bright;
  std::optional<PanelRef> dark;
};

struct ImageEntry {
  std::string id;
  double timestamp = 0.0;
  std::vector<BandEntry> bands;  // exactly 5, blue..nir
  std::optional<DlsRecord> dls;
  std::optional<CalibrationEntry> calibration;
};

/// Ground reference for a panel: a spectrum file or ready band values.
struct PanelSpec {
  std::optional<std::string> spectrum;
  std::optional<BandVector> band_reflectance;
};

struct FlightManifest {
  FlightInfo flight;
  std::map<std::string, PanelSpec> panels;
  std::optional<std::string> rsr_dir;
  std::vector<ImageEntry> images;
  /// Directory relative paths are resolved against.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& relative) const;
};

/// Throws ConfigError naming the offending JSON location.
FlightManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);
FlightManifest load_manifest(const std::filesystem::path& path);
std::string dump_manifest(const FlightManifest& manifest);
void save_manifest(const std::filesystem::path& path, const FlightManifest& manifest);

}  // namespace uasrad::cli
