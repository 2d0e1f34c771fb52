#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "percolor/color.hpp"
#include "percolor/image.hpp"

namespace percolor {

using Point3 = std::array<double, 3>;

/// N x 3 pixel coordinates in one working space, row-major.
struct PixelMatrix {
  ColorSpace space = ColorSpace::Srgb8;
  std::vector<Point3> rows;

  std::size_t size() const { return rows.size(); }
};

enum class KmeansInit { PlusPlus, Random };

struct KmeansConfig {
  int k = 6;
  std::uint64_t seed = 0;
  int max_iters = 100;
  /// Stop when the relative objective improvement falls below this.
  double tol = 1e-6;
  KmeansInit init = KmeansInit::PlusPlus;
  /// Independent seeded runs; the lowest objective wins.
  int restarts = 8;
  /// Worker threads for the assignment step; 0 picks hardware concurrency.
  unsigned threads = 0;
};

struct PaletteResult {
  ColorSpace space = ColorSpace::Srgb8;
  int requested_k = 0;
  /// True when k exceeded the number of distinct points and was reduced.
  bool k_reduced = false;
  std::vector<Point3> centroids;
  std::vector<std::size_t> populations;
  std::vector<Srgb8> centroids_srgb;
  std::vector<std::uint32_t> labels;
  double objective = 0.0;
  int iterations = 0;
  /// Objective after each assignment step of the winning run.
  std::vector<double> objective_history;

  int k() const { return static_cast<int>(centroids.size()); }
  friend bool operator==(const PaletteResult&, const PaletteResult&) = default;
};

/// Clustering coordinates for a color: Srgb8 in [0, 255], HSV/HSL with every
/// channel in [0, 1] (hue / 360), the remaining spaces in native units.
Point3 to_coordinates(const Color& c);
Color from_coordinates(const Point3& p, ColorSpace space);

/// Pixel matrix of an image in SRGB8 coordinates. Throws IoError.
PixelMatrix load_image(const std::filesystem::path& path);

/// Converts every row to `space` coordinates.
PixelMatrix to_space(const PixelMatrix& points, ColorSpace space, const WhitePoint& wp = kD65);
PixelMatrix to_pixel_matrix(const RasterImage& image, ColorSpace space,
                            const WhitePoint& wp = kD65);

/// Lloyd's algorithm with k-means++ (or random) seeding. Deterministic for
/// a fixed seed regardless of thread count. Throws UsageError for k < 1 or
/// an empty matrix.
PaletteResult kmeans(const PixelMatrix& points, const KmeansConfig& cfg,
                     const WhitePoint& wp = kD65);

/// Load, convert to `space`, cluster, convert centroids back to sRGB.
PaletteResult extract_palette(const std::filesystem::path& path, ColorSpace space,
                              const KmeansConfig& cfg, const WhitePoint& wp = kD65);
PaletteResult extract_palette(const RasterImage& image, ColorSpace space, const KmeansConfig& cfg,
                              const WhitePoint& wp = kD65);

/// Swatches sorted by population (descending, ties by index).
std::vector<std::size_t> swatch_order(const PaletteResult& result);

/// Structured text record: space, k, iterations, objective, then one
/// `#RRGGBB,population` line per swatch.
std::string format_palette_report(const PaletteResult& result);

/// One row of swatches per palette, stacked vertically.
void write_swatch_sheet(const std::filesystem::path& path, std::span<const PaletteResult> palettes,
                        int swatch_size = 64);

}  // namespace percolor
