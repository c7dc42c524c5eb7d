// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/graph.hpp"

#include <stdexcept>

#include "p2panon/errors.hpp"

namespace p2panon {

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Line: return "line";
    case TopologyKind::Quasi4Regular: return "quasi_4_regular";
    case TopologyKind::KRegular: return "k_regular";
    case TopologyKind::WeightedRandom: return "weighted_random";
    case TopologyKind::LnSnapshot: return "ln_snapshot";
  }
  return "unknown";
}

Topology::Topology(TopologyKind kind, std::vector<std::vector<NodeId>> successors,
                   std::vector<std::vector<ChannelPolicy>> policies,
                   std::vector<std::string> aliases)
    : kind_(kind),
      succ_(std::move(successors)),
      policies_(std::move(policies)),
      aliases_(std::move(aliases)) {
  const auto n = static_cast<std::uint32_t>(succ_.size());
  if (!policies_.empty() && policies_.size() != succ_.size()) {
    throw InvalidParameterError("policy table size does not match node count");
  }
  if (!aliases_.empty() && aliases_.size() != succ_.size()) {
    throw InvalidParameterError("alias table size does not match node count");
  }
  roles_.assign(n, NodeRole::Honest);
  pred_.assign(n, {});
  for (NodeId u = 0; u < n; ++u) {
    if (!policies_.empty() && policies_[u].size() != succ_[u].size()) {
      throw InvalidParameterError("policy list size does not match successor list");
    }
    for (NodeId v : succ_[u]) {
      if (v >= n) throw InvalidParameterError("edge endpoint out of range");
      if (v == u) throw InvalidParameterError("self-loop rejected");
      pred_[v].push_back(u);
      ++edge_count_;
    }
  }
}

std::span<const ChannelPolicy> Topology::policies(NodeId v) const {
  if (policies_.empty()) return {};
  return policies_[v];
}

std::vector<NodeId> Topology::adversaries() const {
  std::vector<NodeId> out;
  out.reserve(adversary_count_);
  for (NodeId v = 0; v < node_count(); ++v) {
    if (roles_[v] == NodeRole::Adversarial) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> Topology::honest_nodes() const {
  std::vector<NodeId> out;
  out.reserve(honest_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    if (roles_[v] == NodeRole::Honest) out.push_back(v);
  }
  return out;
}

Topology Topology::with_roles(const std::vector<NodeId>& adversarial) const {
  Topology out = *this;
  out.roles_.assign(node_count(), NodeRole::Honest);
  out.adversary_count_ = 0;
  for (NodeId v : adversarial) {
    if (v >= node_count()) throw InvalidParameterError("adversary id out of range");
    if (out.roles_[v] == NodeRole::Honest) {
      out.roles_[v] = NodeRole::Adversarial;
      ++out.adversary_count_;
    }
  }
  return out;
}

}  // namespace p2panon
