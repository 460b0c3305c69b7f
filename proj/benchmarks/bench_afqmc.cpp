#include <benchmark/benchmark.h>

#include "qcafqmc/afqmc.hpp"
#include "qcafqmc/corrsamp.hpp"
#include "qcafqmc/geometry.hpp"

using namespace qcafqmc;

namespace {

AfqmcSystem n2_system() {
  AssembleOptions opts;
  opts.trial_kind = TrialKind::upccd;
  opts.active.mode = ActiveSpec::Mode::explicit_list;
  opts.active.orbitals = {4, 5, 6, 7, 8, 9};
  return to_afqmc_system(assemble_reference(diatomic("N", 1.2), opts));
}

}  // namespace

static void BM_PropagateStepN2(benchmark::State& state) {
  static AfqmcSystem sys = n2_system();
  AfqmcProtocol proto;
  proto.n_walkers = static_cast<int>(state.range(0));
  proto.dt = 0.01;
  proto.seed = 1;
  TrialDetsFull dets = build_full_dets(sys.trial.expansion, sys.part, sys.ham.n_orb);
  PropagatorContext ctx = build_propagator(sys, proto.dt, proto.seed);
  auto walkers = init_walkers(proto.n_walkers, sys);
  int step = 0;
  for (auto _ : state) {
    propagate_step(walkers, ctx, sys, dets, step++, proto);
  }
  state.SetItemsProcessed(state.iterations() * proto.n_walkers);
}
BENCHMARK(BM_PropagateStepN2)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_LocalEnergyN2(benchmark::State& state) {
  static AfqmcSystem sys = n2_system();
  TrialDetsFull dets = build_full_dets(sys.trial.expansion, sys.part, sys.ham.n_orb);
  auto walkers = init_walkers(1, sys);
  for (auto _ : state) {
    auto e = local_energy(dets, sys.ham, sys.chol, walkers[0].phi_a, walkers[0].phi_b);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_LocalEnergyN2)->Unit(benchmark::kMicrosecond);
