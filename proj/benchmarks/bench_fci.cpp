#include <benchmark/benchmark.h>

#include "qcafqmc/fci.hpp"
#include "qcafqmc/geometry.hpp"

using namespace qcafqmc;

static void BM_SigmaN2(benchmark::State& state) {
  SystemSolution sol = solve_system(diatomic("N", 1.2));
  FciSpace space(sol.moham, 7, 7);
  Eigen::VectorXd x = Eigen::VectorXd::Random(space.dim());
  Eigen::VectorXd y(space.dim());
  for (auto _ : state) {
    space.sigma(x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_SigmaN2)->Unit(benchmark::kMillisecond);

static void BM_DavidsonH6(benchmark::State& state) {
  SystemSolution sol = solve_system(linear_chain("H", 6, 1.0));
  for (auto _ : state) {
    FCIResult fci = fci_ground_state(sol.moham, 3, 3);
    benchmark::DoNotOptimize(fci.e0);
  }
}
BENCHMARK(BM_DavidsonH6)->Unit(benchmark::kMillisecond);
