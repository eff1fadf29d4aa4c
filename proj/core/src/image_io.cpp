#include "uasrad/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "uasrad/error.hpp"

namespace uasrad::io {

namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  std::size_t v = 0;
  bool any = false;
  while (std::isdigit(in.peek())) {
    v = v * 10 + static_cast<std::size_t>(in.get() - '0');
    any = true;
    if (v > (1u << 30)) throw FormatError(std::string("PGM ") + what + " too large");
  }
  if (!any) throw FormatError(std::string("PGM header: bad ") + what);
  return v;
}

}  // namespace

RawImage read_pgm(std::istream& in, int band_index) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw FormatError("not a binary PGM file (expected magic P5)");
  }
  const auto width = read_header_int(in, "width");
  const auto height = read_header_int(in, "height");
  const auto maxval = read_header_int(in, "maxval");
  if (maxval == 0 || maxval > 65535) throw FormatError("PGM maxval must be 1..65535");
  if (!std::isspace(in.get())) throw FormatError("PGM header: missing separator before data");
  if (width == 0 || height == 0) throw FormatError("PGM image is empty");

  const std::size_t n = width * height;
  const bool wide = maxval > 255;
  std::vector<unsigned char> bytes(n * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw FormatError("PGM data truncated");
  }
  std::vector<std::uint16_t> px(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = wide ? static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]) : bytes[i];
    if (px[i] > maxval) throw FormatError("PGM sample exceeds maxval");
  }
  const int bits = static_cast<int>(std::bit_width(static_cast<unsigned>(maxval)));
  return RawImage(width, height, band_index, bits, std::move(px));
}

RawImage read_pgm(const std::filesystem::path& path, int band_index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return read_pgm(in, band_index);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, std::size_t width, std::size_t height,
               std::span<const std::uint16_t> pixels, std::uint16_t maxval) {
  if (pixels.size() != width * height) throw DimensionError("PGM: pixel count mismatch");
  out << "P5\n" << width << ' ' << height << '\n' << maxval << '\n';
  if (maxval > 255) {
    std::vector<char> bytes(pixels.size() * 2);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      bytes[2 * i] = static_cast<char>(pixels[i] >> 8);
      bytes[2 * i + 1] = static_cast<char>(pixels[i] & 0xFF);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  } else {
    std::vector<char> bytes(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) bytes[i] = static_cast<char>(pixels[i]);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
}

void write_pgm(const std::filesystem::path& path, const RawImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const auto maxval = static_cast<std::uint16_t>((1u << image.bits_per_pixel()) - 1u);
  write_pgm(out, image.width(), image.height(), image.pixels(), maxval);
}

std::vector<std::uint16_t> scale_to_u16(std::span<const double> values, double factor) {
  std::vector<std::uint16_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::round(values[i] * factor);
    out[i] = std::isnan(v) ? 0 : static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& plane) {
  auto p = plane;
  p += ".json";
  return p;
}

void write_plane(const std::filesystem::path& path, const PlaneInfo& info,
                 std::span<const double> pixels) {
  if (pixels.size() != info.width * info.height) throw DimensionError("plane: pixel count mismatch");
  std::vector<char> bytes(pixels.size() * 4);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(pixels[i]));
    for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  nlohmann::ordered_json side;
  side["width"] = info.width;
  side["height"] = info.height;
  side["band"] = info.band_index;
  side["units"] = info.units;
  side["dtype"] = "float32le";
  std::ofstream out(sidecar_path(path), std::ios::binary);
  if (!out) throw FormatError("cannot write " + sidecar_path(path).string());
  out << side.dump(2) << '\n';
}

PlaneData read_plane(const std::filesystem::path& path) {
  PlaneData data;
  {
    std::ifstream side(sidecar_path(path));
    if (!side) throw FormatError("missing sidecar " + sidecar_path(path).string());
    try {
      const auto j = nlohmann::json::parse(side);
      data.info.width = j.at("width").get<std::size_t>();
      data.info.height = j.at("height").get<std::size_t>();
      data.info.band_index = j.at("band").get<int>();
      data.info.units = j.value("units", "");
      if (j.value("dtype", "float32le") != "float32le") throw FormatError("unsupported plane dtype");
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(sidecar_path(path).string() + ": " + e.what());
    }
  }
  const std::size_t n = data.info.width * data.info.height;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<unsigned char> bytes(n * 4);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size() || in.peek() != EOF) {
    throw FormatError(path.string() + ": size does not match sidecar shape");
  }
  data.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
    data.pixels[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return data;
}

RadianceImage read_radiance_plane(const std::filesystem::path& path) {
  auto d = read_plane(path);
  return RadianceImage(d.info.width, d.info.height, d.info.band_index, std::move(d.pixels));
}

ReflectanceImage read_reflectance_plane(const std::filesystem::path& path) {
  auto d = read_plane(path);
  return ReflectanceImage(d.info.width, d.info.height, d.info.band_index, std::move(d.pixels));
}

}  // namespace uasrad::io
