// Micro-benchmarks for the dispatched kernels: run with
// OCDR_KERNEL_BACKEND=scalar to compare against the SIMD paths.

#include "ocdr/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void bm_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, 1);
  const auto y = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ocdr::kernels::dot(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_fir_same(benchmark::State& state) {
  const auto x = random_vector(100000, 3);
  const auto taps = random_vector(static_cast<std::size_t>(state.range(0)) | 1, 4);
  std::vector<double> out(x.size());
  for (auto _ : state) {
    ocdr::kernels::fir_same(x, taps, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()) *
                          state.range(0));
}

void bm_sum_sq_dev(benchmark::State& state) {
  const auto x = random_vector(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(ocdr::kernels::sum_sq_dev(x, 0.125));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(bm_dot)->Arg(1024)->Arg(65536);
BENCHMARK(bm_fir_same)->Arg(255)->Arg(1337)->Arg(2673);
BENCHMARK(bm_sum_sq_dev)->Arg(65536);

BENCHMARK_MAIN();
