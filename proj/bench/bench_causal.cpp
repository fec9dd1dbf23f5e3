#include <benchmark/benchmark.h>

#include "dyncon/adversary.hpp"
#include "dyncon/causal_kernels.hpp"

using namespace dyncon;

namespace {

GraphSequence expander_rounds(int n) {
  ExpanderConfig cfg;
  cfg.seed = 7;
  cfg.n = n;
  cfg.root_size = n / 8;
  return gen_expander(cfg).rounds;
}

GraphSequence line_rounds(int n) { return gen_static_line(n, 2 * n).rounds; }

void BM_serial_expander(benchmark::State& state) {
  const auto seq = expander_rounds(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(causal_table_serial(seq));
}

void BM_parallel_expander(benchmark::State& state) {
  const auto seq = expander_rounds(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(causal_table(seq));
}

void BM_serial_line(benchmark::State& state) {
  const auto seq = line_rounds(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(causal_table_serial(seq));
}

void BM_parallel_line(benchmark::State& state) {
  const auto seq = line_rounds(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(causal_table(seq));
}

}  // namespace

BENCHMARK(BM_serial_expander)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel_expander)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_serial_line)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel_line)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
