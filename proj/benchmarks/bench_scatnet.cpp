#include <benchmark/benchmark.h>

#include <random>

#include "scatnet/conv_engine.hpp"
#include "scatnet/fft.hpp"
#include "scatnet/scattering.hpp"

using namespace scatnet;

namespace {

Plane noise(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Plane x = make_plane(n, n);
  for (double& v : x.grid.values()) v = u(rng);
  return x;
}

void BM_Conv2dFft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Plane x = noise(n, 1);
  const auto filter = fft::forward(noise(n, 2).grid);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_fft(x, filter, 1));
}
BENCHMARK(BM_Conv2dFft)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_Scatter(benchmark::State& state) {
  ScatteringConfig config;
  config.image_size = static_cast<int>(state.range(0));
  config.J = 5;
  const ScatteringTransform t(config);
  const Plane x = noise(config.image_size, 3);
  for (auto _ : state) benchmark::DoNotOptimize(t.scatter(x));
  state.counters["features"] = static_cast<double>(t.feature_count());
}
BENCHMARK(BM_Scatter)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BuildFilterBank(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_filter_bank(ScatteringConfig{}));
}
BENCHMARK(BM_BuildFilterBank)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
