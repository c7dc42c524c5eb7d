// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P2PANON_POSTERIOR_HPP
#define P2PANON_POSTERIOR_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "p2panon/graph.hpp"

namespace p2panon {

/// Per-node prior weights, indexed by NodeId. An empty span means the
/// uniform prior. Weights need not be normalized; only honest nodes'
/// entries are consulted.
using PriorWeights = std::span<const double>;

/// Probability distribution over candidate originators for one adversarial
/// observation. Only the support is stored, sorted by node id; nodes absent
/// from the support have probability exactly zero.
struct Posterior {
  std::vector<std::pair<NodeId, double>> probabilities;
  std::string observation_key;

  double probability(NodeId v) const {
    auto it = std::lower_bound(probabilities.begin(), probabilities.end(), v,
                               [](const auto& p, NodeId id) { return p.first < id; });
    return (it != probabilities.end() && it->first == v) ? it->second : 0.0;
  }

  std::uint32_t support_size() const { return static_cast<std::uint32_t>(probabilities.size()); }
};

}  // namespace p2panon

#endif  // P2PANON_POSTERIOR_HPP
