#pragma once

// File formats for pixel planes:
//  - binary PGM ("P5"); samples wider than 8 bits are big-endian 16-bit
//  - flat little-endian float32 planes, row-major, with a JSON sidecar
//    (<plane>.json) holding width, height, band and units

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uasrad/image.hpp"

namespace uasrad::io {

RawImage read_pgm(std::istream& in, int band_index);
RawImage read_pgm(const std::filesystem::path& path, int band_index);

void write_pgm(std::ostream& out, std::size_t width, std::size_t height,
               std::span<const std::uint16_t> pixels, std::uint16_t maxval = 65535);
void write_pgm(const std::filesystem::path& path, const RawImage& image);

/// Scales values by `factor`, rounds and saturates into [0, 65535].
std::vector<std::uint16_t> scale_to_u16(std::span<const double> values, double factor);

struct PlaneInfo {
  std::size_t width = 0;
  std::size_t height = 0;
  int band_index = 0;
  std::string units;
};

inline constexpr const char* kRadianceUnits = "W/m^2/sr/nm";
inline constexpr const char* kReflectanceUnits = "reflectance factor";

std::filesystem::path sidecar_path(const std::filesystem::path& plane);

/// Writes the float32 plane and its sidecar.
void write_plane(const std::filesystem::path& path, const PlaneInfo& info,
                 std::span<const double> pixels);

struct PlaneData {
  PlaneInfo info;
  std::vector<double> pixels;
};

/// Reads a plane using its sidecar for the shape.
PlaneData read_plane(const std::filesystem::path& path);

RadianceImage read_radiance_plane(const std::filesystem::path& path);
ReflectanceImage read_reflectance_plane(const std::filesystem::path& path);

}  // namespace uasrad::io
