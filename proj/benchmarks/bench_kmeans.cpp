#include <benchmark/benchmark.h>

#include "percolor/palette.hpp"

using namespace percolor;

namespace {

void kmeans_night_sky(benchmark::State& state) {
  const auto pixels = load_image(PERCOLOR_BENCH_DATA_DIR "/night_sky.png");
  const auto lab = to_space(pixels, ColorSpace::Lab);
  KmeansConfig cfg;
  cfg.k = static_cast<int>(state.range(0));
  cfg.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(lab, cfg).objective);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lab.size()));
}

}  // namespace

BENCHMARK(kmeans_night_sky)->Args({6, 1})->Args({6, 0})->Args({12, 0})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
