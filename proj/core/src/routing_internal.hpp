// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared single-source shortest-path machinery used by the routing module
// and by betweenness counting. Not part of the public surface.

#ifndef P2PANON_SRC_ROUTING_INTERNAL_HPP
#define P2PANON_SRC_ROUTING_INTERNAL_HPP

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "p2panon/graph.hpp"

namespace p2panon::detail {

struct Tree {
  std::vector<double> dist;
  std::vector<NodeId> parent;
  std::vector<char> reached;
};

struct EdgeBan {
  std::unordered_set<std::uint64_t> set;
  void add(NodeId u, NodeId v) { set.insert((static_cast<std::uint64_t>(u) << 32) | v); }
  bool contains(NodeId u, NodeId v) const {
    return set.count((static_cast<std::uint64_t>(u) << 32) | v) != 0;
  }
};

/// Dijkstra with deterministic tie-breaking: among equal-cost paths the
/// lexicographically smallest node sequence wins. Topologies without
/// channel policies are routed over unit edge weights.
Tree dijkstra(const Topology& t, NodeId src, double amount, double rf,
              const std::vector<char>* banned_nodes = nullptr,
              const EdgeBan* banned_edges = nullptr);

void reconstruct(const Tree& tree, NodeId src, NodeId v, std::vector<NodeId>& out);

}  // namespace p2panon::detail

#endif  // P2PANON_SRC_ROUTING_INTERNAL_HPP
