// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stem-overlay inference: an adversary that can route transactions through
// chosen honest nodes reconstructs the stem overlay (PSG) of a base graph
// (BG) from the frequency with which each base out-neighbor diffuses them.

#ifndef P2PANON_SUBGRAPH_LEARNING_HPP
#define P2PANON_SUBGRAPH_LEARNING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "p2panon/graph.hpp"
#include "p2panon/rng.hpp"

namespace p2panon {

/// Diffusion tallies for one probed node, restricted to its base-graph
/// out-neighbors (the only possible stem successors).
struct DiffusionCounts {
  NodeId target = 0;
  /// (candidate, diffusion count) in ascending candidate order.
  std::vector<std::pair<NodeId, std::uint64_t>> counts;
};

/// Runs tx_count stem walks injected at `target` (which forwards each
/// transaction with probability 1 to a uniformly chosen PSG successor) and
/// tallies which of target's BG out-neighbors diffused each one.
DiffusionCounts simulate_diffusion_counts(const Topology& bg, const Topology& psg,
                                          NodeId target, std::uint32_t tx_count, double p_f,
                                          RngStream& rng);

struct InferredSuccessors {
  NodeId first = 0;
  NodeId second = 0;
  /// Set when the count boundary between rank 2 and rank 3 was a tie, so
  /// the pair was decided by the smaller-id rule.
  bool tie_flagged = false;
};

/// The two candidates with the highest diffusion counts; ties break toward
/// the smaller node id.
InferredSuccessors infer_successors(const DiffusionCounts& dc);

struct TargetInference {
  NodeId target = 0;
  NodeId first = 0;
  NodeId second = 0;
  /// Count gap between the rank-2 and rank-3 candidates; 0 when fewer than
  /// three candidates exist.
  std::uint64_t confidence_gap = 0;
  bool tie_flagged = false;
};

struct LearnOptions {
  /// Skip frequency inference for successors already pinned down by
  /// adversary-incident edges.
  bool elimination = false;
  /// Also credit candidates for diffusions by their own base out-neighbors
  /// (evidence from second-hop forwarding).
  bool second_hop = false;
};

struct LearnedSubgraph {
  /// Two inferred successor edges per honest probed node.
  std::vector<std::pair<NodeId, NodeId>> inferred_edges;
  /// PSG edges incident to an adversary, known without probing.
  std::vector<std::pair<NodeId, NodeId>> known_edges;
  std::vector<TargetInference> targets;
  /// Fraction of true PSG edges present in inferred_edges union known_edges.
  double accuracy = 0.0;
};

/// Full attack: place adversaries, probe every honest node, and score the
/// reconstruction against the true PSG.
LearnedSubgraph learn_privacy_subgraph(const Topology& bg, const Topology& psg,
                                       double adversary_fraction, std::uint32_t tx_per_node,
                                       double p_f, std::uint64_t seed,
                                       const LearnOptions& options = {}, unsigned workers = 1);

}  // namespace p2panon

#endif  // P2PANON_SUBGRAPH_LEARNING_HPP
