#include <random>

#include <benchmark/benchmark.h>

#include "hhdx/hochschild.hpp"
#include "hhdx/linalg.hpp"

using namespace hhdx;

namespace {

FpMatrix random_matrix(std::size_t n, std::uint32_t p) {
  PrimeField f(p);
  std::mt19937 rng(static_cast<unsigned>(n));
  FpMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rng() % p;
  return m;
}

void BM_rank_parallel(benchmark::State& s) {
  auto m = random_matrix(static_cast<std::size_t>(s.range(0)), 97);
  for (auto _ : s) benchmark::DoNotOptimize(rank_kernel_image(m).rank);
}

void BM_rank_serial(benchmark::State& s) {
  auto m = random_matrix(static_cast<std::size_t>(s.range(0)), 97);
  for (auto _ : s) benchmark::DoNotOptimize(serial::rank_kernel_image(m).rank);
}

StructAlgebra bench_algebra(std::int64_t n) {
  PrimeField f(3);
  return StructAlgebra::matrix_algebra(f, static_cast<std::size_t>(n));
}

void BM_bar_parallel(benchmark::State& s) {
  auto a = bench_algebra(s.range(0));
  auto m = Bimodule::regular(a);
  for (auto _ : s) benchmark::DoNotOptimize(bar_complex(a, m, 3).dim(3));
}

void BM_bar_serial(benchmark::State& s) {
  auto a = bench_algebra(s.range(0));
  auto m = Bimodule::regular(a);
  for (auto _ : s) benchmark::DoNotOptimize(serial::bar_complex(a, m, 3).dim(3));
}

}  // namespace

BENCHMARK(BM_rank_parallel)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_serial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bar_parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bar_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
