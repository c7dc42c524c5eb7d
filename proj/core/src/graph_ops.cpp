// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p2panon/errors.hpp"
#include "p2panon/rng.hpp"
#include "routing_internal.hpp"

namespace p2panon {

Topology filter_by_amount(const Topology& t, double amount) {
  if (amount < 0) throw InvalidParameterError("amount must be non-negative");
  if (!t.has_policies()) {
    throw InvalidParameterError("filter_by_amount requires channel capacities");
  }
  const std::uint32_t n = t.node_count();
  std::vector<std::vector<NodeId>> succ(n);
  std::vector<std::vector<ChannelPolicy>> pols(n);
  for (NodeId u = 0; u < n; ++u) {
    auto dsts = t.successors(u);
    auto policies = t.policies(u);
    for (std::size_t i = 0; i < dsts.size(); ++i) {
      if (policies[i].capacity / 2.0 >= amount) {
        succ[u].push_back(dsts[i]);
        pols[u].push_back(policies[i]);
      }
    }
  }
  Topology out(t.kind(), std::move(succ), std::move(pols), t.aliases());
  return out.with_roles(t.adversaries());
}

Topology largest_connected_component(const Topology& t) {
  const std::uint32_t n = t.node_count();
  if (n == 0) throw EmptyInputError("largest_connected_component of an empty topology");

  std::vector<std::uint32_t> component(n, n);
  std::vector<NodeId> stack;
  std::uint32_t components = 0;
  for (NodeId start = 0; start < n; ++start) {
    if (component[start] != n) continue;
    component[start] = components;
    stack.assign(1, start);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : t.successors(v)) {
        if (component[u] == n) {
          component[u] = components;
          stack.push_back(u);
        }
      }
      for (NodeId u : t.predecessors(v)) {
        if (component[u] == n) {
          component[u] = components;
          stack.push_back(u);
        }
      }
    }
    ++components;
  }

  std::vector<std::uint32_t> sizes(components, 0);
  for (NodeId v = 0; v < n; ++v) ++sizes[component[v]];
  // Components are discovered in ascending order of their smallest node, so
  // the first maximal one realizes the smallest-contained-id tie-break.
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < components; ++c) {
    if (sizes[c] > sizes[best]) best = c;
  }

  std::vector<NodeId> remap(n, n);
  std::vector<NodeId> kept;
  std::vector<std::string> aliases;
  for (NodeId v = 0; v < n; ++v) {
    if (component[v] == best) {
      remap[v] = static_cast<NodeId>(kept.size());
      kept.push_back(v);
      if (!t.aliases().empty()) aliases.push_back(t.aliases()[v]);
    }
  }

  std::vector<std::vector<NodeId>> succ(kept.size());
  std::vector<std::vector<ChannelPolicy>> pols(t.has_policies() ? kept.size() : 0);
  std::vector<NodeId> adversarial;
  for (NodeId v : kept) {
    NodeId nv = remap[v];
    auto dsts = t.successors(v);
    auto policies = t.policies(v);
    for (std::size_t i = 0; i < dsts.size(); ++i) {
      succ[nv].push_back(remap[dsts[i]]);
      if (t.has_policies()) pols[nv].push_back(policies[i]);
    }
    if (t.is_adversarial(v)) adversarial.push_back(nv);
  }
  Topology out(t.kind(), std::move(succ), std::move(pols), std::move(aliases));
  return out.with_roles(adversarial);
}

std::vector<double> betweenness_centrality(const Topology& t, double amount,
                                           double risk_factor) {
  const std::uint32_t n = t.node_count();
  std::vector<double> counts(n, 0.0);
  std::vector<NodeId> honest = t.honest_nodes();
  std::vector<NodeId> path;
  for (NodeId src : honest) {
    detail::Tree tree = detail::dijkstra(t, src, amount, risk_factor);
    for (NodeId dst : honest) {
      if (dst == src || !tree.reached[dst]) continue;
      detail::reconstruct(tree, src, dst, path);
      for (std::size_t i = 1; i + 1 < path.size(); ++i) counts[path[i]] += 1.0;
    }
  }
  return counts;
}

const char* to_string(AdversaryStrategy s) {
  switch (s) {
    case AdversaryStrategy::Random: return "random";
    case AdversaryStrategy::TopDegree: return "top_degree";
    case AdversaryStrategy::TopBetweenness: return "top_betweenness";
  }
  return "unknown";
}

Topology assign_adversaries(const Topology& t, AdversaryStrategy strategy, std::uint32_t count,
                            std::uint64_t seed, double amount, double risk_factor) {
  const std::uint32_t n = t.node_count();
  if (count == 0 || count >= n) {
    throw InvalidParameterError("adversary count must satisfy 0 < count < N");
  }

  std::vector<NodeId> chosen;
  switch (strategy) {
    case AdversaryStrategy::Random: {
      auto rng = RngStream::derive(seed, "assign-adversaries");
      auto picks = rng.sample_indices(n, count);
      chosen.assign(picks.begin(), picks.end());
      break;
    }
    case AdversaryStrategy::TopDegree: {
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (t.total_degree(a) != t.total_degree(b)) return t.total_degree(a) > t.total_degree(b);
        return a < b;
      });
      chosen.assign(order.begin(), order.begin() + count);
      break;
    }
    case AdversaryStrategy::TopBetweenness: {
      Topology all_honest = t.with_roles({});
      std::vector<double> scores = betweenness_centrality(all_honest, amount, risk_factor);
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
      });
      chosen.assign(order.begin(), order.begin() + count);
      break;
    }
  }
  return t.with_roles(chosen);
}

}  // namespace p2panon
