#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "percolor/color.hpp"

namespace percolor {

/// Opaque 8-bit sRGB raster, row-major.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<Srgb8> pixels;

  Srgb8 at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Reads PNG or JPEG (detected from the file signature). Alpha is
/// composited over opaque white. Throws IoError for a missing file, an
/// unsupported format, a decode failure or a zero-pixel image.
RasterImage read_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG. `channels` is 3 (RGB) or 4 (RGBA); `bytes` holds
/// width * height * channels samples.
void write_png(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> bytes, int channels);
void write_png(const std::filesystem::path& path, const RasterImage& image);

/// Baseline RGB JPEG, used for fixtures.
void write_jpeg(const std::filesystem::path& path, const RasterImage& image, int quality = 95);

}  // namespace percolor
