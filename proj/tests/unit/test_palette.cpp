#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "gen.hpp"
#include "percolor/error.hpp"
#include "percolor/palette.hpp"
#include "kmeans_oracle.hpp"
#include "temp_dir.hpp"

using namespace percolor;
using doctest::Approx;

namespace {

PixelMatrix random_points(test::Gen& gen, std::size_t n, double scale = 100.0) {
  PixelMatrix m;
  m.space = ColorSpace::Lab;
  for (std::size_t i = 0; i < n; ++i) m.rows.push_back({gen.real(0, scale), gen.real(0, scale), gen.real(0, scale)});
  return m;
}

// Three blobs of `n` points around well separated centers.
PixelMatrix blobs(test::Gen& gen, std::size_t n) {
  const Point3 centers[] = {{20, 20, 20}, {70, 30, 50}, {40, 80, 10}};
  PixelMatrix m;
  m.space = ColorSpace::Lab;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[i % 3];
    m.rows.push_back({c[0] + gen.real(-12, 12), c[1] + gen.real(-12, 12), c[2] + gen.real(-12, 12)});
  }
  return m;
}

}  // namespace

TEST_SUITE("palette") {

TEST_CASE("objective never increases") {
  test::Gen gen(50);
  for (int inst = 0; inst < 50; ++inst) {
    const auto pts = random_points(gen, static_cast<std::size_t>(gen.integer(20, 400)));
    KmeansConfig cfg;
    cfg.k = gen.integer(1, 8);
    cfg.seed = static_cast<std::uint64_t>(inst);
    cfg.init = inst % 2 ? KmeansInit::Random : KmeansInit::PlusPlus;
    const auto r = kmeans(pts, cfg);
    REQUIRE_FALSE(r.objective_history.empty());
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      CHECK(r.objective_history[i] <= r.objective_history[i - 1] * (1 + 1e-12));
    }
    CHECK(r.objective == r.objective_history.back());
    std::size_t total = 0;
    for (auto p : r.populations) total += p;
    CHECK(total == pts.size());
  }
}

TEST_CASE("k = 1 gives the mean") {
  test::Gen gen(1);
  const auto pts = random_points(gen, 997);
  Point3 mean{0, 0, 0};
  for (const auto& p : pts.rows) for (int d = 0; d < 3; ++d) mean[d] += p[d];
  for (auto& m : mean) m /= static_cast<double>(pts.size());
  KmeansConfig cfg;
  cfg.k = 1;
  const auto r = kmeans(pts, cfg);
  REQUIRE(r.k() == 1);
  for (int d = 0; d < 3; ++d) CHECK(std::abs(r.centroids[0][d] - mean[d]) <= 1e-9 * std::abs(mean[d]));
}

TEST_CASE("fixed seed is bit identical, independent of thread count") {
  test::Gen gen(4);
  const auto pts = random_points(gen, 70000);
  KmeansConfig cfg;
  cfg.k = 5;
  cfg.seed = 42;
  cfg.restarts = 2;
  cfg.threads = 1;
  const auto first = kmeans(pts, cfg);
  for (unsigned threads : {1u, 2u, 4u, 0u}) {
    cfg.threads = threads;
    CHECK(kmeans(pts, cfg) == first);
  }
  cfg.seed = 43;
  CHECK_FALSE(kmeans(pts, cfg) == first);
}

TEST_CASE("near the brute-force optimum on small instances") {
  test::Gen gen(3);
  for (int inst = 0; inst < 5; ++inst) {
    const auto pts = inst % 2 ? blobs(gen, 100) : random_points(gen, 100);
    KmeansConfig cfg;
    cfg.k = 3;
    cfg.seed = static_cast<std::uint64_t>(inst);
    const double ours = kmeans(pts, cfg).objective;
    const double oracle = test::brute_force_objective(pts.rows, 3, 1000);
    CHECK(ours <= oracle * 1.05);
  }
}

TEST_CASE("k is reduced to the distinct point count") {
  PixelMatrix m;
  m.space = ColorSpace::Srgb8;
  for (int i = 0; i < 30; ++i) m.rows.push_back({double(10 * (i % 3)), 0, 0});
  KmeansConfig cfg;
  cfg.k = 6;
  const auto r = kmeans(m, cfg);
  CHECK(r.k_reduced);
  CHECK(r.requested_k == 6);
  CHECK(r.k() == 3);
  CHECK(r.objective == 0.0);
  CHECK(format_palette_report(r).find("requested_k: 6") != std::string::npos);
}

TEST_CASE("invalid configurations") {
  test::Gen gen(0);
  const auto pts = random_points(gen, 10);
  KmeansConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(kmeans(pts, cfg), UsageError);
  cfg.k = 2;
  CHECK_THROWS_AS(kmeans(PixelMatrix{}, cfg), UsageError);
  cfg.max_iters = 0;
  CHECK_THROWS_AS(kmeans(pts, cfg), UsageError);
}

TEST_CASE("solid image gives one swatch of that color") {
  RasterImage img{8, 8, std::vector<Srgb8>(64, Srgb8{12, 200, 99})};
  KmeansConfig cfg;
  cfg.k = 1;
  for (ColorSpace s : {ColorSpace::Srgb8, ColorSpace::Hsv, ColorSpace::Hsl, ColorSpace::Xyz, ColorSpace::Lab,
                       ColorSpace::Luv}) {
    const auto r = extract_palette(img, s, cfg);
    REQUIRE(r.k() == 1);
    CHECK(r.centroids_srgb[0] == Srgb8{12, 200, 99});
    CHECK(r.populations[0] == 64);
  }
}

TEST_CASE("hsv coordinates scale hue into [0, 1]") {
  const Point3 p = to_coordinates(Hsv{180, 0.5, 0.25});
  CHECK(p == Point3{0.5, 0.5, 0.25});
  CHECK(std::get<Hsv>(from_coordinates(p, ColorSpace::Hsv)) == Hsv{180, 0.5, 0.25});
}

TEST_CASE("report lists swatches by population") {
  RasterImage img{4, 1, {{255, 0, 0}, {255, 0, 0}, {255, 0, 0}, {0, 0, 255}}};
  KmeansConfig cfg;
  cfg.k = 2;
  const auto r = extract_palette(img, ColorSpace::Srgb8, cfg);
  CHECK(format_palette_report(r) ==
        "space: srgb\nk: 2\niterations: 1\nobjective: 0.0000\nswatch,population\n#FF0000,3\n#0000FF,1\n");
}

TEST_CASE("swatch sheet layout") {
  test::TempDir dir("sheet");
  RasterImage img{2, 1, {{255, 0, 0}, {0, 0, 255}}};
  KmeansConfig cfg;
  cfg.k = 2;
  std::vector<PaletteResult> palettes{extract_palette(img, ColorSpace::Srgb8, cfg),
                                      extract_palette(img, ColorSpace::Lab, cfg)};
  const auto path = dir / "sheet.png";
  write_swatch_sheet(path, palettes, 10);
  const RasterImage sheet = read_image(path);
  CHECK(sheet.width == 4 + 2 * 14);
  CHECK(sheet.height == 4 + 2 * 14);
  CHECK(sheet.at(0, 0) == Srgb8{255, 255, 255});
  for (int row = 0; row < 2; ++row) {
    const auto order = swatch_order(palettes[row]);
    for (int col = 0; col < 2; ++col) {
      CHECK(sheet.at(4 + col * 14 + 5, 4 + row * 14 + 5) == palettes[row].centroids_srgb[order[col]]);
    }
  }
  CHECK_THROWS_AS(write_swatch_sheet(path, {}, 10), UsageError);
}

}  // TEST_SUITE
