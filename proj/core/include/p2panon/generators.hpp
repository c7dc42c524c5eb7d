// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Topology generators. Every generator is a pure function of its
// parameters: identical inputs yield identical topologies.

#ifndef P2PANON_GENERATORS_HPP
#define P2PANON_GENERATORS_HPP

#include <cstdint>

#include "p2panon/graph.hpp"

namespace p2panon {

/// Single directed cycle over a random permutation of n nodes, the stem
/// overlay used by predecessor-only hop-by-hop routing. Requires n >= 3.
Topology generate_line_graph(std::uint32_t n, std::uint64_t seed);

/// Each node independently selects 2 distinct successors uniformly among
/// the other n-1 nodes. Outdegree is exactly 2 everywhere, indegree is
/// whatever the draws produce. Requires n >= 5.
Topology generate_quasi_4_regular(std::uint32_t n, std::uint64_t seed);

/// Each node selects out_k distinct successors uniformly among the other
/// n-1 nodes. Requires n > out_k >= 1.
Topology generate_k_regular(std::uint32_t n, std::uint32_t out_k, std::uint64_t seed);

/// Undirected G(n, M) random graph with M = floor(n * avg_degree / 2),
/// materialized as paired directed edges. Per-direction base fees are drawn
/// from an exponential distribution with the given mean (floored at 1 cost
/// unit); capacities are large so that amount filtering is non-binding.
/// Requires n > avg_degree >= 2. Connectivity is not guaranteed.
Topology generate_weighted_random_graph(std::uint32_t n, std::uint32_t avg_degree,
                                        double mean_fee, std::uint64_t seed);

/// Stem overlay derived from a base graph: each node picks
/// successors_per_node of its base out-neighbors as stem successors.
/// Requires every node of the base to have at least successors_per_node
/// out-neighbors.
Topology derive_stem_subgraph(const Topology& base, std::uint32_t successors_per_node,
                              std::uint64_t seed);

}  // namespace p2panon

#endif  // P2PANON_GENERATORS_HPP
