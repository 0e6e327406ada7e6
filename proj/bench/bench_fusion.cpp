// Serial reference vs OpenMP kernel for the fusion-dimension verifier.
#include <benchmark/benchmark.h>

#include "uqg/fusion.hpp"

namespace {

void BM_VerifySerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int max_len = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(uqg::verify_fusion_dims_serial(n, max_len));
}

void BM_VerifyParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int max_len = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(uqg::verify_fusion_dims(n, max_len));
}

void BM_MinDimSequence(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(uqg::min_dim_sequence(5, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_VerifySerial)->Args({3, 5})->Args({4, 7})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Args({3, 5})->Args({4, 7})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinDimSequence)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
