// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "haarflow/ensemble.hpp"
#include "haarflow/gates.hpp"
#include "haarflow/haar.hpp"
#include "haarflow/moments.hpp"
#include "haarflow/numkernel.hpp"
#include "haarflow/peterweyl.hpp"
#include "haarflow/rng.hpp"

namespace hf = haarflow;

namespace {

hf::ens::GateEnsemble clifford_t() {
  return hf::ens::symmetrize(hf::ens::GateEnsemble::discrete(
      2, {{0.5, hf::gates::hadamard()}, {0.5, hf::gates::t_gate()}}));
}

void BM_Kron(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  hf::SeededRng rng(1, 0);
  const hf::ComplexMatrix a = hf::haar::sample_haar(n, rng);
  const hf::ComplexMatrix b = hf::haar::sample_haar(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hf::num::kron(a, b));
  }
}
BENCHMARK(BM_Kron)->Arg(4)->Arg(16);

void BM_OperatorNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  hf::SeededRng rng(2, 0);
  hf::ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = hf::Complex(rng.gauss(), rng.gauss());
  for (auto _ : state) {
    benchmark::DoNotOptimize(hf::num::operator_norm(m));
  }
}
BENCHMARK(BM_OperatorNorm)->Arg(16)->Arg(64);

void BM_SampleHaar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  hf::SeededRng rng(3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hf::haar::sample_haar(n, rng));
  }
}
BENCHMARK(BM_SampleHaar)->Arg(2)->Arg(4)->Arg(16);

void BM_WignerD(benchmark::State& state) {
  const int tj = static_cast<int>(state.range(0));
  hf::SeededRng rng(4, 0);
  const hf::ComplexMatrix g = hf::haar::sample_haar(2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hf::pw::wigner_d(tj, g));
  }
}
BENCHMARK(BM_WignerD)->Arg(2)->Arg(6)->Arg(12);

void BM_MomentBuildMC(benchmark::State& state) {
  const auto e = clifford_t();
  const long long samples = state.range(0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    hf::SeededRng rng(seed++, 0);
    benchmark::DoNotOptimize(hf::mom::build_moment_operator(e, 2, samples, rng));
  }
}
BENCHMARK(BM_MomentBuildMC)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
