#pragma once

// Synthetic flight: two calibration frames under different illumination and
// eight field frames, rendered through a zero-path atmosphere and the camera
// model into 16-bit PGMs with a manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uasrad/reflectance.hpp"

namespace uasrad::cli {

struct SynthFlightOptions {
  std::size_t width = 128;
  std::size_t height = 48;
  std::uint64_t seed = 1;
};

struct PanelTruth {
  std::string image_id;
  std::string panel_id;
  Roi roi;
  BandVector reflectance{};
};

struct SynthFlight {
  std::filesystem::path manifest;
  std::vector<std::string> calibration_images;
  std::vector<std::string> field_images;
  /// Panel regions in every frame.
  std::vector<PanelTruth> truth;
};

SynthFlight generate_synthetic_flight(const std::filesystem::path& dir, const SynthFlightOptions& options = {});

}  // namespace uasrad::cli
