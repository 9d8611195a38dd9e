#include <benchmark/benchmark.h>

#include <strongconv/choi.hpp>
#include <strongconv/convergence.hpp>
#include <strongconv/random.hpp>

using namespace strongconv;

namespace {

void BM_strong_distance(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(1);
  QuantumOperation a = random_channel(rng, d, d, 2);
  QuantumOperation b = random_channel(rng, d, d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(strong_distance(a, b));
}
BENCHMARK(BM_strong_distance)->Arg(2)->Arg(4)->Arg(8);

void BM_cj_roundtrip(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(2);
  QuantumOperation phi = random_channel(rng, d, d, 2);
  for (auto _ : state) {
    QuantumOperation back = cj_inverse(cj_forward(phi));
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_cj_roundtrip)->Arg(2)->Arg(4)->Arg(8);

void BM_dual_ladder(benchmark::State& state) {
  ChannelSequence seq = rotating_basis_family(4, 1.0);
  TruncationLadder ladder = TruncationLadder::prefixes(4, {1, 2, 4});
  std::vector<Index> window = dense_indices(1, state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(dual_ladder(seq, ladder, window));
}
BENCHMARK(BM_dual_ladder)->Arg(32)->Arg(64);

void BM_limit_extraction(benchmark::State& state) {
  ChannelSequence seq = constant_output_family(4);
  std::vector<Index> window = dense_indices(1, state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(extract_limit_point(seq, window));
}
BENCHMARK(BM_limit_extraction)->Arg(32)->Arg(64)->Arg(128);

void BM_full_diagnostics(benchmark::State& state) {
  ChannelSequence seq = orthogonal_isometries_family(2, 32);
  std::vector<Index> window = dense_indices(1, 32);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_diagnostics(seq, window));
}
BENCHMARK(BM_full_diagnostics);

}  // namespace

BENCHMARK_MAIN();
