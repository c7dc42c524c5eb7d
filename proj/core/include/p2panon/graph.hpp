// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P2PANON_GRAPH_HPP
#define P2PANON_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace p2panon {

/// Node identifier, dense in [0, N) within one Topology.
using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Honest, Adversarial };

enum class TopologyKind : std::uint8_t {
  Line,
  Quasi4Regular,
  KRegular,
  WeightedRandom,
  LnSnapshot,
};

const char* to_string(TopologyKind kind);

/// Per-direction attributes of a payment channel. The policy applies to the
/// direction leaving the node that advertises it. `capacity` is the total
/// bidirectional channel capacity; half of it is assumed available per
/// direction.
struct ChannelPolicy {
  double proportional_fee_rate = 0.0;  ///< fee as fraction of the amount
  double base_fee = 0.0;               ///< flat fee in cost units
  double timelock = 0.0;               ///< blocks
  double capacity = 0.0;               ///< currency units, total for the channel

  bool operator==(const ChannelPolicy&) const = default;
};

/// A directed network topology with node roles. Immutable after
/// construction: all transforming operations return a new value, so
/// topologies are safe to share read-only across threads.
class Topology {
 public:
  Topology(TopologyKind kind, std::vector<std::vector<NodeId>> successors,
           std::vector<std::vector<ChannelPolicy>> policies = {},
           std::vector<std::string> aliases = {});

  TopologyKind kind() const { return kind_; }
  std::uint32_t node_count() const { return static_cast<std::uint32_t>(succ_.size()); }
  std::uint64_t edge_count() const { return edge_count_; }

  NodeRole role(NodeId v) const { return roles_[v]; }
  bool is_adversarial(NodeId v) const { return roles_[v] == NodeRole::Adversarial; }
  std::uint32_t adversary_count() const { return adversary_count_; }
  std::uint32_t honest_count() const { return node_count() - adversary_count_; }
  std::vector<NodeId> adversaries() const;
  std::vector<NodeId> honest_nodes() const;

  std::span<const NodeId> successors(NodeId v) const { return succ_[v]; }
  std::span<const NodeId> predecessors(NodeId v) const { return pred_[v]; }

  /// Channel policies aligned index-for-index with successors(v).
  /// Empty for topologies without channel attributes.
  std::span<const ChannelPolicy> policies(NodeId v) const;
  bool has_policies() const { return !policies_.empty(); }

  std::uint32_t out_degree(NodeId v) const { return static_cast<std::uint32_t>(succ_[v].size()); }
  std::uint32_t in_degree(NodeId v) const { return static_cast<std::uint32_t>(pred_[v].size()); }
  std::uint32_t total_degree(NodeId v) const { return out_degree(v) + in_degree(v); }

  /// External name of a node; empty when the topology was generated rather
  /// than loaded from a snapshot.
  const std::vector<std::string>& aliases() const { return aliases_; }

  /// Copy of this topology with the given nodes marked adversarial and all
  /// others honest. The edge set is unchanged.
  Topology with_roles(const std::vector<NodeId>& adversarial) const;

 private:
  TopologyKind kind_;
  std::vector<std::vector<NodeId>> succ_;
  std::vector<std::vector<NodeId>> pred_;
  std::vector<std::vector<ChannelPolicy>> policies_;
  std::vector<NodeRole> roles_;
  std::vector<std::string> aliases_;
  std::uint64_t edge_count_ = 0;
  std::uint32_t adversary_count_ = 0;
};

}  // namespace p2panon

#endif  // P2PANON_GRAPH_HPP
