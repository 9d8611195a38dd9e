#include <benchmark/benchmark.h>

#include <cmath>

#include <strongconv/entropy.hpp>
#include <strongconv/random.hpp>
#include <strongconv/recovery.hpp>

using namespace strongconv;

namespace {

void BM_relative_entropy(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(1);
  PositiveOperator rho = random_faithful_state(rng, d).positive();
  PositiveOperator sig = random_faithful_state(rng, d).positive();
  for (auto _ : state)
    benchmark::DoNotOptimize(relative_entropy(rho, sig));
}
BENCHMARK(BM_relative_entropy)->Arg(4)->Arg(16)->Arg(64);

void BM_qcmi(benchmark::State& state) {
  Rng rng(2);
  State omega = random_state(rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(qcmi(omega, 2, 2, 2));
}
BENCHMARK(BM_qcmi);

void BM_petz_map(benchmark::State& state) {
  const Index d = state.range(0);
  Rng rng(3);
  QuantumOperation phi = random_channel(rng, d, d, 2);
  State sigma = random_faithful_state(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(petz_map(phi, sigma));
}
BENCHMARK(BM_petz_map)->Arg(2)->Arg(4)->Arg(6);

void BM_preservation_harness(benchmark::State& state) {
  const Index d = 4;
  State rho0 = default_faithful_state(d);
  State sigma0{Cmat(Cmat::Identity(d, d) / double(d))};
  ChannelSequence seq = rotating_basis_family(d, 1.0);
  std::vector<Index> window = geometric_indices(1, Index(1) << 12, 13);
  for (auto _ : state) {
    auto rep = convergence_preservation_harness(
        seq, [&rho0](Index) { return rho0; },
        [&sigma0](Index) { return sigma0; }, rho0, sigma0, window);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_preservation_harness);

}  // namespace
