// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles for correctness tests. Everything here is computed
// from first principles (exhaustive expansion or brute-force enumeration),
// deliberately sharing no code with the library paths it checks.

#ifndef P2PANON_TESTS_ORACLES_HPP
#define P2PANON_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "p2panon/graph.hpp"
#include "p2panon/ln.hpp"
#include "p2panon/stem.hpp"

namespace p2panon::test {

/// Exhaustive expansion of the stem process from one originator: every coin
/// outcome and every successor choice, with exact probability bookkeeping.
/// Walks stop at the first adversarial recipient (contributing to that
/// observation), at a diffusion decision, at a duplicate recipient, or at
/// the hop bound. Returns P(first interception = obs | originator).
inline std::map<StemObservation, double> stem_decision_tree(const Topology& t, NodeId origin,
                                                            double p_f,
                                                            std::uint32_t max_hops) {
  std::map<StemObservation, double> out;
  std::vector<char> visited(t.node_count(), 0);
  visited[origin] = 1;

  auto expand = [&](auto&& self, NodeId at, double prob, std::uint32_t hops) -> void {
    auto succ = t.successors(at);
    if (succ.empty()) return;
    double forward_prob = hops == 0 ? 1.0 : p_f;  // the originator always forwards
    double branch = prob * forward_prob / static_cast<double>(succ.size());
    if (branch <= 0.0) return;
    for (NodeId next : succ) {
      if (t.is_adversarial(next)) {
        if (hops + 1 <= max_hops) out[StemObservation{next, at}] += branch;
        continue;
      }
      if (visited[next]) continue;  // duplicate suppression ends the stem
      if (hops + 1 >= max_hops) continue;
      visited[next] = 1;
      self(self, next, branch, hops + 1);
      visited[next] = 0;
    }
  };
  expand(expand, origin, 1.0, 0);
  return out;
}

/// All simple paths src -> dst by exhaustive DFS, each with its
/// left-to-right cost, sorted by (cost, node sequence). Unit edge weights
/// when the topology has no policies.
inline std::vector<Route> brute_force_all_routes(const Topology& t, NodeId src, NodeId dst,
                                                 double amount, double rf) {
  std::vector<Route> routes;
  std::vector<NodeId> path{src};
  std::vector<char> on_path(t.node_count(), 0);
  on_path[src] = 1;

  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (v == dst) {
      double cost = 0.0;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto succ = t.successors(path[i]);
        auto idx = static_cast<std::size_t>(
            std::find(succ.begin(), succ.end(), path[i + 1]) - succ.begin());
        cost += t.has_policies() ? edge_cost(amount, t.policies(path[i])[idx], rf, 0.0) : 1.0;
      }
      routes.push_back(Route{path, cost});
      return;
    }
    for (NodeId u : t.successors(v)) {
      if (on_path[u]) continue;
      on_path[u] = 1;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[u] = 0;
    }
  };
  dfs(dfs, src);
  std::sort(routes.begin(), routes.end(), [](const Route& a, const Route& b) {
    if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
    return a.nodes < b.nodes;
  });
  return routes;
}

/// Best-k routes by brute force: top slice of the full enumeration.
inline std::vector<Route> brute_force_best_k(const Topology& t, NodeId src, NodeId dst,
                                             double amount, double rf, std::uint32_t k) {
  auto all = brute_force_all_routes(t, src, dst, amount, rf);
  if (all.size() > k) all.resize(k);
  return all;
}

/// Observation extraction reimplemented for independence from the library.
inline std::optional<LnObservation> brute_force_observation(const std::vector<NodeId>& nodes,
                                                            const Topology& t) {
  std::optional<std::size_t> first, last;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    if (t.is_adversarial(nodes[i])) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) return std::nullopt;
  return LnObservation{nodes[*first - 1], nodes[*first], nodes[*last], nodes[*last + 1]};
}

/// Posterior over origins for one observation by brute-force counting over
/// the best-k universe of every ordered honest pair.
inline std::map<NodeId, double> brute_force_ln_posterior(const Topology& t, double amount,
                                                         double rf, std::uint32_t k,
                                                         const LnObservation& obs) {
  std::map<NodeId, double> likelihood;
  for (NodeId src = 0; src < t.node_count(); ++src) {
    if (t.is_adversarial(src)) continue;
    std::uint64_t total = 0, matching = 0;
    for (NodeId dst = 0; dst < t.node_count(); ++dst) {
      if (dst == src || t.is_adversarial(dst)) continue;
      for (const Route& r : brute_force_best_k(t, src, dst, amount, rf, k)) {
        ++total;
        auto o = brute_force_observation(r.nodes, t);
        if (o && *o == obs) ++matching;
      }
    }
    if (total > 0 && matching > 0) {
      likelihood[src] = static_cast<double>(matching) / static_cast<double>(total);
    }
  }
  double sum = 0.0;
  for (const auto& [node, l] : likelihood) sum += l;
  for (auto& [node, l] : likelihood) l /= sum;
  return likelihood;
}

/// Union-find component sizes, an independent check for connected-component
/// extraction.
inline std::vector<std::uint32_t> union_find_component_sizes(const Topology& t) {
  std::vector<std::uint32_t> parent(t.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (NodeId u = 0; u < t.node_count(); ++u) {
    for (NodeId v : t.successors(u)) {
      parent[find(u)] = find(v);
    }
  }
  std::map<std::uint32_t, std::uint32_t> sizes;
  for (NodeId v = 0; v < t.node_count(); ++v) ++sizes[find(v)];
  std::vector<std::uint32_t> out;
  for (const auto& [root, size] : sizes) out.push_back(size);
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// Directed test graph builder for hand-made layouts.
inline Topology make_graph(std::uint32_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                           TopologyKind kind = TopologyKind::Quasi4Regular,
                           const std::vector<NodeId>& adversaries = {}) {
  std::vector<std::vector<NodeId>> succ(n);
  for (const auto& [u, v] : edges) succ[u].push_back(v);
  Topology t(kind, std::move(succ));
  return t.with_roles(adversaries);
}

/// Unit-cost bidirectional graph with policies (base fee 1 per direction).
inline Topology make_unit_fee_graph(std::uint32_t n,
                                    const std::vector<std::pair<NodeId, NodeId>>& channels,
                                    const std::vector<NodeId>& adversaries = {},
                                    double capacity = 1e9) {
  std::vector<std::vector<NodeId>> succ(n);
  std::vector<std::vector<ChannelPolicy>> pols(n);
  ChannelPolicy policy{0.0, 1.0, 0.0, capacity};
  for (const auto& [u, v] : channels) {
    succ[u].push_back(v);
    pols[u].push_back(policy);
    succ[v].push_back(u);
    pols[v].push_back(policy);
  }
  Topology t(TopologyKind::LnSnapshot, std::move(succ), std::move(pols));
  return t.with_roles(adversaries);
}

}  // namespace p2panon::test

#endif  // P2PANON_TESTS_ORACLES_HPP
