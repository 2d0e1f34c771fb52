#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "percolor/metrics.hpp"

using namespace percolor;

namespace {

std::vector<Lab> random_labs(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> l(0, 100), ab(-100, 100);
  std::vector<Lab> out(n);
  for (auto& c : out) c = {l(rng), ab(rng), ab(rng)};
  return out;
}

template <typename F>
void lab_metric(benchmark::State& state, F f) {
  const auto labs = random_labs(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(labs[i & 4095], labs[(i + 1) & 4095]));
    ++i;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void registry_all(benchmark::State& state) {
  const auto& reg = MetricRegistry::defaults();
  std::mt19937_64 rng(3);
  std::vector<Srgb8> colors(4096);
  for (auto& c : colors) c = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
  std::size_t i = 0;
  for (auto _ : state) {
    for (const auto& m : reg.descriptors()) {
      benchmark::DoNotOptimize(evaluate(m, colors[i & 4095], colors[(i + 7) & 4095]));
    }
    ++i;
  }
}

}  // namespace

BENCHMARK_CAPTURE(lab_metric, delta_e76, [](const Lab& a, const Lab& b) { return delta_e76(a, b); });
BENCHMARK_CAPTURE(lab_metric, delta_e94, [](const Lab& a, const Lab& b) { return delta_e94(a, b); });
BENCHMARK_CAPTURE(lab_metric, delta_e2000, [](const Lab& a, const Lab& b) { return delta_e2000(a, b); });
BENCHMARK_CAPTURE(lab_metric, delta_cmc, [](const Lab& a, const Lab& b) { return delta_cmc(a, b); });
BENCHMARK(registry_all);
