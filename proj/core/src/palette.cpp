#include "percolor/palette.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "percolor/convert.hpp"
#include "percolor/error.hpp"
#include "percolor/format.hpp"
#include "percolor/parse.hpp"
#include "percolor/random.hpp"

namespace percolor {
namespace {

double squared_distance(const Point3& a, const Point3& b) {
  const double d0 = a[0] - b[0];
  const double d1 = a[1] - b[1];
  const double d2 = a[2] - b[2];
  return d0 * d0 + d1 * d1 + d2 * d2;
}

std::size_t count_distinct(const std::vector<Point3>& rows) {
  std::vector<Point3> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

struct Run {
  std::vector<Point3> centroids;
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> populations;
  std::vector<double> history;
  double objective = 0.0;
  int iterations = 0;
};

std::vector<Point3> seed_plus_plus(const std::vector<Point3>& pts, std::size_t k, Rng& rng) {
  std::vector<Point3> centers;
  centers.reserve(k);
  centers.push_back(pts[rng.index(pts.size())]);
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = squared_distance(pts[i], centers[0]);
  while (centers.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t chosen = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (d2[i] <= 0.0) continue;
      chosen = i;
      acc += d2[i];
      if (acc > target) break;
    }
    // k <= distinct points, so some d2 is positive and `chosen` is set.
    centers.push_back(pts[chosen]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts[i], centers.back()));
    }
  }
  return centers;
}

std::vector<Point3> seed_random(const std::vector<Point3>& pts, std::size_t k, Rng& rng) {
  std::vector<Point3> centers;
  centers.reserve(k);
  while (centers.size() < k) {
    const Point3& candidate = pts[rng.index(pts.size())];
    if (std::find(centers.begin(), centers.end(), candidate) == centers.end()) {
      centers.push_back(candidate);
    }
  }
  return centers;
}

// Nearest centroid per point (lowest index wins ties). Workers write
// disjoint slices, so the result does not depend on the thread count.
void assign(const std::vector<Point3>& pts, const std::vector<Point3>& centers,
            std::vector<std::uint32_t>& labels, std::vector<double>& dist, unsigned threads) {
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::uint32_t best = 0;
      double best_d = squared_distance(pts[i], centers[0]);
      for (std::uint32_t c = 1; c < centers.size(); ++c) {
        const double d = squared_distance(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[i] = best;
      dist[i] = best_d;
    }
  };
  constexpr std::size_t kMinPerThread = 16384;
  const std::size_t n = pts.size();
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, n / kMinPerThread));
  if (workers <= 1) {
    work(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
}

Run lloyd(const std::vector<Point3>& pts, std::vector<Point3> centers, const KmeansConfig& cfg,
          unsigned threads) {
  const std::size_t n = pts.size();
  const std::size_t k = centers.size();
  Run run;
  run.labels.assign(n, 0);
  std::vector<double> dist(n);
  std::vector<std::uint32_t> previous;

  for (int iter = 1;; ++iter) {
    assign(pts, centers, run.labels, dist, threads);
    const double objective = std::accumulate(dist.begin(), dist.end(), 0.0);
    run.history.push_back(objective);
    run.iterations = iter;

    bool converged = objective == 0.0 || run.labels == previous;
    if (run.history.size() >= 2) {
      const double prev = run.history[run.history.size() - 2];
      if (prev - objective <= cfg.tol * prev) converged = true;
    }
    if (converged || iter >= cfg.max_iters) break;
    previous = run.labels;

    // Centroid update, accumulated in point order.
    std::vector<Point3> sums(k, Point3{0, 0, 0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[run.labels[i]];
      s[0] += pts[i][0];
      s[1] += pts[i][1];
      s[2] += pts[i][2];
      ++counts[run.labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      centers[c] = {sums[c][0] * inv, sums[c][1] * inv, sums[c][2] * inv};
    }
    // An empty cluster takes over the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.labels[i]] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far == n) break;
      --counts[run.labels[far]];
      run.labels[far] = static_cast<std::uint32_t>(c);
      counts[c] = 1;
      dist[far] = 0.0;
      centers[c] = pts[far];
    }
  }

  run.centroids = std::move(centers);
  run.objective = run.history.back();
  run.populations.assign(k, 0);
  for (auto label : run.labels) ++run.populations[label];
  return run;
}

}  // namespace

Point3 to_coordinates(const Color& c) {
  switch (tag_of(c)) {
    case ColorSpace::Srgb8: {
      const auto& v = std::get<Srgb8>(c);
      return {double(v.r), double(v.g), double(v.b)};
    }
    case ColorSpace::LinearRgb: {
      const auto& v = std::get<LinearRgb>(c);
      return {v.r, v.g, v.b};
    }
    case ColorSpace::Xyz: {
      const auto& v = std::get<Xyz>(c);
      return {v.x, v.y, v.z};
    }
    case ColorSpace::Lab: {
      const auto& v = std::get<Lab>(c);
      return {v.l, v.a, v.b};
    }
    case ColorSpace::Luv: {
      const auto& v = std::get<Luv>(c);
      return {v.l, v.u, v.v};
    }
    case ColorSpace::Hsv: {
      const auto& v = std::get<Hsv>(c);
      return {v.h / 360.0, v.s, v.v};
    }
    case ColorSpace::Hsl: {
      const auto& v = std::get<Hsl>(c);
      return {v.h / 360.0, v.s, v.l};
    }
  }
  return {};
}

Color from_coordinates(const Point3& p, ColorSpace space) {
  switch (space) {
    case ColorSpace::Srgb8: {
      auto q = [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      };
      return Srgb8{q(p[0]), q(p[1]), q(p[2])};
    }
    case ColorSpace::LinearRgb: return LinearRgb{p[0], p[1], p[2]};
    case ColorSpace::Xyz: return Xyz{p[0], p[1], p[2]};
    case ColorSpace::Lab: return Lab{p[0], p[1], p[2]};
    case ColorSpace::Luv: return Luv{p[0], p[1], p[2]};
    case ColorSpace::Hsv: return Hsv{p[0] * 360.0, p[1], p[2]};
    case ColorSpace::Hsl: return Hsl{p[0] * 360.0, p[1], p[2]};
  }
  return Srgb8{};
}

PixelMatrix load_image(const std::filesystem::path& path) {
  return to_pixel_matrix(read_image(path), ColorSpace::Srgb8);
}

PixelMatrix to_space(const PixelMatrix& points, ColorSpace space, const WhitePoint& wp) {
  PixelMatrix out;
  out.space = space;
  out.rows.reserve(points.rows.size());
  for (const auto& row : points.rows) {
    out.rows.push_back(to_coordinates(convert(from_coordinates(row, points.space), space, wp)));
  }
  return out;
}

PixelMatrix to_pixel_matrix(const RasterImage& image, ColorSpace space, const WhitePoint& wp) {
  PixelMatrix out;
  out.space = space;
  out.rows.reserve(image.pixels.size());
  // Photographs repeat colors heavily; convert each distinct one once.
  std::unordered_map<std::uint32_t, Point3> cache;
  for (const Srgb8 px : image.pixels) {
    const std::uint32_t key = (std::uint32_t(px.r) << 16) | (std::uint32_t(px.g) << 8) | px.b;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, to_coordinates(convert(px, space, wp))).first;
    out.rows.push_back(it->second);
  }
  return out;
}

PaletteResult kmeans(const PixelMatrix& points, const KmeansConfig& cfg, const WhitePoint& wp) {
  if (cfg.k < 1) throw UsageError("k must be at least 1, got " + std::to_string(cfg.k));
  if (points.rows.empty()) throw UsageError("kmeans: no points");
  if (cfg.max_iters < 1) throw UsageError("max_iters must be positive");
  if (!(cfg.tol >= 0.0)) throw UsageError("tol must be non-negative");

  PaletteResult result;
  result.space = points.space;
  result.requested_k = cfg.k;
  std::size_t k = static_cast<std::size_t>(cfg.k);
  const std::size_t distinct = count_distinct(points.rows);
  if (k > distinct) {
    k = distinct;
    result.k_reduced = true;
  }
  const unsigned threads =
      cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;

  Run best;
  best.objective = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, cfg.restarts);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    auto centers = cfg.init == KmeansInit::PlusPlus ? seed_plus_plus(points.rows, k, rng)
                                                     : seed_random(points.rows, k, rng);
    Run run = lloyd(points.rows, std::move(centers), cfg, threads);
    if (run.objective < best.objective) best = std::move(run);
    if (best.objective == 0.0) break;
  }

  result.centroids = std::move(best.centroids);
  result.populations = std::move(best.populations);
  result.labels = std::move(best.labels);
  result.objective = best.objective;
  result.iterations = best.iterations;
  result.objective_history = std::move(best.history);
  result.centroids_srgb.reserve(result.centroids.size());
  for (const auto& c : result.centroids) {
    result.centroids_srgb.push_back(
        std::get<Srgb8>(convert(from_coordinates(c, points.space), ColorSpace::Srgb8, wp)));
  }
  return result;
}

PaletteResult extract_palette(const RasterImage& image, ColorSpace space, const KmeansConfig& cfg,
                              const WhitePoint& wp) {
  return kmeans(to_pixel_matrix(image, space, wp), cfg, wp);
}

PaletteResult extract_palette(const std::filesystem::path& path, ColorSpace space,
                              const KmeansConfig& cfg, const WhitePoint& wp) {
  return extract_palette(read_image(path), space, cfg, wp);
}

std::vector<std::size_t> swatch_order(const PaletteResult& result) {
  std::vector<std::size_t> order(result.centroids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.populations[a] > result.populations[b];
  });
  return order;
}

std::string format_palette_report(const PaletteResult& result) {
  std::ostringstream out;
  out << "space: " << to_string(result.space) << '\n';
  out << "k: " << result.k() << '\n';
  if (result.k_reduced) out << "requested_k: " << result.requested_k << " (reduced to distinct colors)\n";
  out << "iterations: " << result.iterations << '\n';
  out << "objective: " << format_fixed(result.objective) << '\n';
  out << "swatch,population\n";
  for (std::size_t i : swatch_order(result)) {
    out << to_hex(result.centroids_srgb[i]) << ',' << result.populations[i] << '\n';
  }
  return out.str();
}

void write_swatch_sheet(const std::filesystem::path& path, std::span<const PaletteResult> palettes,
                        int swatch_size) {
  if (palettes.empty()) throw UsageError("swatch sheet needs at least one palette");
  if (swatch_size < 1) throw UsageError("swatch size must be positive");
  constexpr int kGap = 4;
  std::size_t columns = 0;
  for (const auto& p : palettes) columns = std::max(columns, p.centroids_srgb.size());
  const int cols = static_cast<int>(columns);
  const int rows = static_cast<int>(palettes.size());
  RasterImage sheet;
  sheet.width = kGap + cols * (swatch_size + kGap);
  sheet.height = kGap + rows * (swatch_size + kGap);
  sheet.pixels.assign(static_cast<std::size_t>(sheet.width) * sheet.height, Srgb8{255, 255, 255});
  for (int r = 0; r < rows; ++r) {
    const auto order = swatch_order(palettes[r]);
    for (std::size_t c = 0; c < order.size(); ++c) {
      const Srgb8 color = palettes[r].centroids_srgb[order[c]];
      const int x0 = kGap + static_cast<int>(c) * (swatch_size + kGap);
      const int y0 = kGap + r * (swatch_size + kGap);
      for (int y = y0; y < y0 + swatch_size; ++y) {
        std::fill_n(sheet.pixels.begin() + static_cast<std::ptrdiff_t>(y) * sheet.width + x0,
                    swatch_size, color);
      }
    }
  }
  write_png(path, sheet);
}

}  // namespace percolor
