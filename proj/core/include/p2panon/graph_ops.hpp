// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Topology transforms and interrogation: capacity filtering, connected
// components, routing betweenness, and adversary placement.

#ifndef P2PANON_GRAPH_OPS_HPP
#define P2PANON_GRAPH_OPS_HPP

#include <cstdint>
#include <vector>

#include "p2panon/graph.hpp"
#include "p2panon/ln.hpp"

namespace p2panon {

/// Drops every directed edge whose per-direction balance (capacity / 2)
/// cannot carry `amount`. The node set and roles are unchanged. Requires a
/// topology with channel policies.
Topology filter_by_amount(const Topology& t, double amount);

/// Induced subgraph on the largest weakly-connected component, node ids
/// remapped densely in ascending original order. Ties between equal-sized
/// components break toward the one containing the smallest original id.
Topology largest_connected_component(const Topology& t);

/// Raw best-path betweenness counts: for every ordered pair of honest
/// nodes, the unique best route (same cost model and tie-breaking as
/// best_path) increments each strict intermediary. Unreachable pairs are
/// skipped.
std::vector<double> betweenness_centrality(const Topology& t, double amount = 1.0,
                                           double risk_factor = kDefaultRiskFactor);

enum class AdversaryStrategy : std::uint8_t { Random, TopDegree, TopBetweenness };

const char* to_string(AdversaryStrategy s);

/// Marks exactly `count` nodes adversarial and all others honest; the edge
/// set is untouched. Random draws uniformly without replacement from the
/// seed; TopDegree ranks by indegree + outdegree; TopBetweenness ranks by
/// betweenness_centrality computed with all nodes honest. Ties break toward
/// the smaller node id.
Topology assign_adversaries(const Topology& t, AdversaryStrategy strategy, std::uint32_t count,
                            std::uint64_t seed, double amount = 1.0,
                            double risk_factor = kDefaultRiskFactor);

}  // namespace p2panon

#endif  // P2PANON_GRAPH_OPS_HPP
