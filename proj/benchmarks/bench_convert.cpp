#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "percolor/convert.hpp"

using namespace percolor;

namespace {

std::vector<Srgb8> random_colors() {
  std::mt19937_64 rng(11);
  std::vector<Srgb8> out(4096);
  for (auto& c : out) c = {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())};
  return out;
}

void to_space(benchmark::State& state) {
  const auto space = static_cast<ColorSpace>(state.range(0));
  const auto colors = random_colors();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(convert(colors[i++ & 4095], space));
  state.SetLabel(std::string(to_string(space)));
}

void lab_round_trip(benchmark::State& state) {
  const auto colors = random_colors();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(convert_to<Srgb8>(convert_to<Lab>(colors[i++ & 4095])));
}

}  // namespace

BENCHMARK(to_space)->DenseRange(0, 6);
BENCHMARK(lab_round_trip);
