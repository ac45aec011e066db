#include <benchmark/benchmark.h>

#include "admmnet/engine.hpp"
#include "admmnet/experiment.hpp"
#include "admmnet/road.hpp"

using namespace admmnet;

namespace {

struct Fixture {
  Topology topo;
  ConsensusOperators ops;
  CostList costs;

  explicit Fixture(int D) {
    auto inst = synth_regression(11, D);
    costs = inst.costs;
    topo = build_topology(D, 3, random_connected_edges(D, 0.5, 7));
    ops = build_operators(topo);
  }
};

void BM_BuildOperators(benchmark::State& state) {
  const int D = static_cast<int>(state.range(0));
  const Topology topo = build_topology(D, 3, random_connected_edges(D, 0.5, 7));
  for (auto _ : state) {
    ConsensusOperators ops = build_operators(topo);
    benchmark::DoNotOptimize(ops.Q.data());
  }
}
BENCHMARK(BM_BuildOperators)->Arg(10)->Arg(20)->Arg(40);

void BM_AdmmStep(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  AdmmConfig cfg;
  cfg.c = 1.0;
  cfg.verify_identities = false;
  ErrorModel model;
  NetworkState s = init_state(f.ops, model, cfg.c);
  for (auto _ : state) {
    step(s, f.costs, f.ops, cfg, model);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_AdmmStep)->Arg(10)->Arg(20);

void BM_RoadStep(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  AdmmConfig cfg;
  cfg.c = 1.0;
  cfg.verify_identities = false;
  ErrorModel model;
  NetworkState s = init_state(f.ops, model, cfg.c);
  DeviationTracker tracker(1e12);
  for (auto _ : state) {
    road_step(s, tracker, f.costs, f.ops, cfg, model);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_RoadStep)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
