#include <benchmark/benchmark.h>

#include "qcafqmc/geometry.hpp"
#include "qcafqmc/integrals.hpp"

using namespace qcafqmc;

static void BM_IntegralsN2(benchmark::State& state) {
  Geometry g = diatomic("N", 1.2);
  BasisSet basis = build_sto3g(g);
  for (auto _ : state) {
    IntegralSet ints = compute_integrals(g, basis);
    benchmark::DoNotOptimize(ints.eri.raw().data());
  }
}
BENCHMARK(BM_IntegralsN2)->Unit(benchmark::kMillisecond);

static void BM_IntegralsH6(benchmark::State& state) {
  Geometry g = linear_chain("H", 6, 1.0);
  BasisSet basis = build_sto3g(g);
  for (auto _ : state) {
    IntegralSet ints = compute_integrals(g, basis);
    benchmark::DoNotOptimize(ints.eri.raw().data());
  }
}
BENCHMARK(BM_IntegralsH6)->Unit(benchmark::kMillisecond);
