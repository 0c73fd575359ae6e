#include <benchmark/benchmark.h>

#include "chowliu/chowliu.hpp"
#include "chowliu/harness.hpp"
#include "chowliu/kernels.hpp"

using namespace chowliu;

namespace {

SampleSet make_samples(std::size_t n, std::size_t k, std::size_t rows) {
  Rng rng(7);
  return sample(random_tree_model(n, k, 0.05, rng), rows, 11);
}

void BM_PairCountsSerial(benchmark::State& state) {
  const auto s = make_samples(static_cast<std::size_t>(state.range(0)), 4, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_pair_counts_serial(s));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_PairCountsOpenMP(benchmark::State& state) {
  const auto s = make_samples(static_cast<std::size_t>(state.range(0)), 4, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_pair_counts(s));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_MiMatrixSerial(benchmark::State& state) {
  const auto s = make_samples(static_cast<std::size_t>(state.range(0)), 4, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mi_matrix_serial(s));
}

void BM_MiMatrixOpenMP(benchmark::State& state) {
  const auto s = make_samples(static_cast<std::size_t>(state.range(0)), 4, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mi_matrix(s));
}

}  // namespace

BENCHMARK(BM_PairCountsSerial)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_PairCountsOpenMP)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_MiMatrixSerial)->Args({20, 10000})->Args({50, 100000});
BENCHMARK(BM_MiMatrixOpenMP)->Args({20, 10000})->Args({50, 100000});

BENCHMARK_MAIN();
