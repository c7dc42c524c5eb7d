// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "p2panon/generators.hpp"
#include "p2panon/graph_ops.hpp"
#include "p2panon/ln.hpp"
#include "p2panon/metrics.hpp"
#include "p2panon/stem.hpp"
#include "p2panon/subgraph_learning.hpp"

namespace {

using namespace p2panon;

void BM_GenerateLineGraph(benchmark::State& state) {
  auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_line_graph(n, seed++));
  }
}
BENCHMARK(BM_GenerateLineGraph)->Arg(1000)->Arg(5000);

void BM_DandelionPosterior(benchmark::State& state) {
  Topology t = assign_adversaries(generate_line_graph(1000, 1), AdversaryStrategy::Random,
                                  static_cast<std::uint32_t>(state.range(0)), 2);
  NodeId adversary = t.adversaries().front();
  StemObservation obs{adversary, t.predecessors(adversary)[0]};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dandelion_posterior(t, 0.9, obs));
  }
}
BENCHMARK(BM_DandelionPosterior)->Arg(10)->Arg(200);

void BM_DppPosterior(benchmark::State& state) {
  Topology t = assign_adversaries(generate_quasi_4_regular(1000, 1), AdversaryStrategy::Random,
                                  static_cast<std::uint32_t>(state.range(0)), 2);
  NodeId adversary = 0;
  for (NodeId a : t.adversaries()) {
    if (!t.predecessors(a).empty() && !t.is_adversarial(t.predecessors(a)[0])) {
      adversary = a;
      break;
    }
  }
  StemObservation obs{adversary, t.predecessors(adversary)[0]};
  PathEnumerationBounds bounds{12, 1e-12};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpp_posterior(t, 0.9, obs, bounds));
  }
}
BENCHMARK(BM_DppPosterior)->Arg(10)->Arg(200);

void BM_StemWalk(benchmark::State& state) {
  Topology t = assign_adversaries(generate_quasi_4_regular(1000, 3), AdversaryStrategy::Random,
                                  100, 4);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = RngStream::derive(7, "bench-walk", i++);
    benchmark::DoNotOptimize(simulate_stem_phase(t, 1, 0.9, rng));
  }
}
BENCHMARK(BM_StemWalk);

void BM_BestPath(benchmark::State& state) {
  Topology t = generate_weighted_random_graph(static_cast<std::uint32_t>(state.range(0)), 5,
                                              1000.0, 5);
  NodeId dst = t.node_count() - 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_path(t, 0, dst, 1.0));
  }
}
BENCHMARK(BM_BestPath)->Arg(300)->Arg(1000);

void BM_BestKPaths(benchmark::State& state) {
  Topology t = generate_weighted_random_graph(200, 5, 1000.0, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_k_paths(t, 0, 199, 1.0, static_cast<std::uint32_t>(state.range(0))));
  }
}
BENCHMARK(BM_BestKPaths)->Arg(1)->Arg(5);

void BM_BuildPathSet(benchmark::State& state) {
  Topology t = assign_adversaries(
      generate_weighted_random_graph(static_cast<std::uint32_t>(state.range(0)), 5, 1000.0, 7),
      AdversaryStrategy::TopDegree, 5, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_path_set(t, 1.0, 1));
  }
}
BENCHMARK(BM_BuildPathSet)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BetweennessCentrality(benchmark::State& state) {
  Topology t = generate_weighted_random_graph(static_cast<std::uint32_t>(state.range(0)), 5,
                                              1000.0, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(betweenness_centrality(t));
  }
}
BENCHMARK(BM_BetweennessCentrality)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_DiffusionProbe(benchmark::State& state) {
  Topology bg = generate_k_regular(1000, 8, 9);
  Topology psg = derive_stem_subgraph(bg, 2, 10);
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = RngStream::derive(11, "bench-probe", i++);
    benchmark::DoNotOptimize(simulate_diffusion_counts(bg, psg, 17, 50, 0.9, rng));
  }
}
BENCHMARK(BM_DiffusionProbe);

}  // namespace

BENCHMARK_MAIN();
