#include <benchmark/benchmark.h>

#include "ringlab/jordan.hpp"
#include "ringlab/limitlaw.hpp"
#include "ringlab/randmat.hpp"
#include "ringlab/spectra.hpp"
#include "ringlab/weingarten.hpp"

using namespace ringlab;

static void BM_HaarUnitary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) {
    auto u = randmat::sample_haar_unitary(n, SeededStream{1, index++});
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_HaarUnitary)->Arg(64)->Arg(256);

static void BM_Eigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = randmat::sample_ginibre(n, SeededStream{2, 0});
  for (auto _ : state) {
    auto spectrum = spectra::eigenvalues(g);
    benchmark::DoNotOptimize(spectrum.eigenvalues.data());
  }
}
BENCHMARK(BM_Eigenvalues)->Arg(128)->Arg(256);

static void BM_CharacteristicRatio(benchmark::State& state) {
  const int n = 50, r = 4;
  const auto a = randmat::sample_ginibre(n, SeededStream{3, 0});
  RandomStream stream(SeededStream{3, 1});
  ComplexMatrix b(n, r), c(r, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) {
      b(i, j) = stream.gaussian_complex();
      c(j, i) = stream.gaussian_complex();
    }
  for (auto _ : state) {
    auto f = spectra::characteristic_ratio({3.0, 0.5}, a, b, c);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_CharacteristicRatio);

static void BM_WeingartenTable(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto table = weingarten::build_table(k, 10);
    benchmark::DoNotOptimize(&table);
  }
}
BENCHMARK(BM_WeingartenTable)->Arg(4)->Arg(5)->Arg(6);

static void BM_Constellation(benchmark::State& state) {
  const jordan::JordanSpec spec({{Complex{4, 1}, {{3, 1}, {1, 1}}}});
  const auto basis = jordan::BasisSpec::identity(4);
  std::uint64_t index = 0;
  for (auto _ : state) {
    auto draw = limitlaw::sample_constellation(spec, basis, 2.4664414, SeededStream{4, index++});
    benchmark::DoNotOptimize(&draw);
  }
}
BENCHMARK(BM_Constellation);

BENCHMARK_MAIN();
