// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/generators.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>

#include "p2panon/errors.hpp"
#include "p2panon/rng.hpp"

namespace p2panon {

namespace {

/// k distinct successors for node u, uniform over [0, n) \ {u}.
std::vector<NodeId> pick_successors(std::uint32_t n, NodeId u, std::uint32_t k, RngStream& rng) {
  std::vector<NodeId> out;
  out.reserve(k);
  if (k * 4 <= n) {
    // Rejection sampling; expected retries are negligible for k << n.
    std::unordered_set<NodeId> seen;
    while (out.size() < k) {
      auto v = static_cast<NodeId>(rng.next_index(n));
      if (v == u || seen.count(v)) continue;
      seen.insert(v);
      out.push_back(v);
    }
  } else {
    std::vector<std::uint32_t> pool;
    pool.reserve(n - 1);
    for (NodeId v = 0; v < n; ++v) {
      if (v != u) pool.push_back(v);
    }
    for (std::uint32_t i = 0; i < k; ++i) {
      auto j = static_cast<std::uint32_t>(rng.next_index(pool.size() - i));
      out.push_back(pool[j]);
      pool[j] = pool[pool.size() - i - 1];
    }
  }
  return out;
}

}  // namespace

Topology generate_line_graph(std::uint32_t n, std::uint64_t seed) {
  if (n < 3) throw InvalidParameterError("line graph requires n >= 3");
  auto rng = RngStream::derive(seed, "line-graph");
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  rng.shuffle(order);
  std::vector<std::vector<NodeId>> succ(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    succ[order[i]].push_back(order[(i + 1) % n]);
  }
  return Topology(TopologyKind::Line, std::move(succ));
}

Topology generate_quasi_4_regular(std::uint32_t n, std::uint64_t seed) {
  if (n < 5) throw InvalidParameterError("quasi 4-regular graph requires n >= 5");
  auto rng = RngStream::derive(seed, "quasi-4-regular");
  std::vector<std::vector<NodeId>> succ(n);
  for (NodeId u = 0; u < n; ++u) {
    succ[u] = pick_successors(n, u, 2, rng);
  }
  return Topology(TopologyKind::Quasi4Regular, std::move(succ));
}

Topology generate_k_regular(std::uint32_t n, std::uint32_t out_k, std::uint64_t seed) {
  if (out_k < 1 || n <= out_k) throw InvalidParameterError("k-regular graph requires n > out_k >= 1");
  auto rng = RngStream::derive(seed, "k-regular");
  std::vector<std::vector<NodeId>> succ(n);
  for (NodeId u = 0; u < n; ++u) {
    succ[u] = pick_successors(n, u, out_k, rng);
  }
  return Topology(TopologyKind::KRegular, std::move(succ));
}

Topology generate_weighted_random_graph(std::uint32_t n, std::uint32_t avg_degree,
                                        double mean_fee, std::uint64_t seed) {
  if (avg_degree < 2 || n <= avg_degree) {
    throw InvalidParameterError("weighted random graph requires n > avg_degree >= 2");
  }
  if (mean_fee <= 0) throw InvalidParameterError("mean_fee must be positive");
  auto rng = RngStream::derive(seed, "weighted-random");
  const std::uint64_t target_edges = static_cast<std::uint64_t>(n) * avg_degree / 2;

  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(target_edges * 2);
  std::vector<std::pair<NodeId, NodeId>> channels;
  channels.reserve(target_edges);
  while (channels.size() < target_edges) {
    auto a = static_cast<NodeId>(rng.next_index(n));
    auto b = static_cast<NodeId>(rng.next_index(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (!chosen.insert(key).second) continue;
    channels.emplace_back(a, b);
  }

  constexpr double kCapacity = 1e12;  // effectively unbounded for amount filtering
  auto draw_policy = [&]() {
    // Exponential fee with the requested mean, floored at one cost unit.
    double fee = std::max(1.0, std::round(-mean_fee * std::log(1.0 - rng.next_unit())));
    return ChannelPolicy{1e-6, fee, 40.0, kCapacity};
  };

  std::vector<std::vector<NodeId>> succ(n);
  std::vector<std::vector<ChannelPolicy>> pols(n);
  for (const auto& [a, b] : channels) {
    succ[a].push_back(b);
    pols[a].push_back(draw_policy());
    succ[b].push_back(a);
    pols[b].push_back(draw_policy());
  }
  return Topology(TopologyKind::WeightedRandom, std::move(succ), std::move(pols));
}

Topology derive_stem_subgraph(const Topology& base, std::uint32_t successors_per_node,
                              std::uint64_t seed) {
  const std::uint32_t n = base.node_count();
  auto rng = RngStream::derive(seed, "stem-subgraph");
  std::vector<std::vector<NodeId>> succ(n);
  for (NodeId u = 0; u < n; ++u) {
    auto options = base.successors(u);
    if (options.size() < successors_per_node) {
      throw InvalidParameterError("node " + std::to_string(u) +
                                  " has fewer base out-neighbors than requested");
    }
    auto picks = rng.sample_indices(static_cast<std::uint32_t>(options.size()),
                                    successors_per_node);
    for (auto idx : picks) succ[u].push_back(options[idx]);
  }
  return Topology(TopologyKind::Quasi4Regular, std::move(succ));
}

}  // namespace p2panon
