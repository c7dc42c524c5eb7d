// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/subgraph_learning.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <unordered_map>

#include "p2panon/errors.hpp"
#include "parallel.hpp"

namespace p2panon {

namespace {

/// One injected stem walk over the PSG; returns the node that decides to
/// diffuse. The target forwards with probability 1, later hops with
/// probability p_f. A walk that loops back to a visited node ends without a
/// clean diffuser (the duplicate is ignored and some embargo timer fires
/// later), so it contributes nothing to the tally.
std::optional<NodeId> walk_to_diffusion(const Topology& psg, NodeId target, double p_f,
                                        RngStream& rng, std::vector<char>& visited) {
  std::fill(visited.begin(), visited.end(), 0);
  visited[target] = 1;
  NodeId current = target;
  bool first = true;
  for (;;) {
    auto succ = psg.successors(current);
    if (succ.empty()) return current;
    if (!first && !rng.next_bernoulli(p_f)) return current;
    NodeId next = succ[rng.next_index(succ.size())];
    if (visited[next]) return std::nullopt;
    visited[next] = 1;
    current = next;
    first = false;
  }
}

std::vector<NodeId> sorted_candidates(const Topology& bg, NodeId target) {
  std::vector<NodeId> candidates(bg.successors(target).begin(), bg.successors(target).end());
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

}  // namespace

DiffusionCounts simulate_diffusion_counts(const Topology& bg, const Topology& psg,
                                          NodeId target, std::uint32_t tx_count, double p_f,
                                          RngStream& rng) {
  if (target >= psg.node_count()) throw InvalidParameterError("target out of range");
  if (bg.node_count() != psg.node_count()) {
    throw InvalidParameterError("base graph and stem overlay node sets differ");
  }
  DiffusionCounts dc;
  dc.target = target;
  std::vector<NodeId> candidates = sorted_candidates(bg, target);
  std::unordered_map<NodeId, std::size_t> slot;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    dc.counts.emplace_back(candidates[i], 0);
    slot.emplace(candidates[i], i);
  }
  std::vector<char> visited(psg.node_count(), 0);
  for (std::uint32_t i = 0; i < tx_count; ++i) {
    auto diffuser = walk_to_diffusion(psg, target, p_f, rng, visited);
    if (!diffuser) continue;
    auto it = slot.find(*diffuser);
    if (it != slot.end()) ++dc.counts[it->second].second;
  }
  return dc;
}

InferredSuccessors infer_successors(const DiffusionCounts& dc) {
  if (dc.counts.size() < 2) {
    throw InsufficientDataError("fewer than two candidate successors for node " +
                                std::to_string(dc.target));
  }
  std::vector<std::pair<NodeId, std::uint64_t>> ranked = dc.counts;
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  InferredSuccessors out;
  out.first = ranked[0].first;
  out.second = ranked[1].first;
  out.tie_flagged = ranked.size() > 2 && ranked[1].second == ranked[2].second;
  return out;
}

LearnedSubgraph learn_privacy_subgraph(const Topology& bg, const Topology& psg,
                                       double adversary_fraction, std::uint32_t tx_per_node,
                                       double p_f, std::uint64_t seed,
                                       const LearnOptions& options, unsigned workers) {
  const std::uint32_t n = bg.node_count();
  if (psg.node_count() != n) {
    throw InvalidParameterError("base graph and stem overlay node sets differ");
  }
  if (adversary_fraction <= 0.0 || adversary_fraction >= 1.0) {
    throw InvalidParameterError("adversary fraction must lie in (0, 1)");
  }

  auto count = static_cast<std::uint32_t>(
      std::max<std::int64_t>(1, std::llround(adversary_fraction * n)));
  auto placement = RngStream::derive(seed, "learn-adversaries");
  auto picks = placement.sample_indices(n, count);
  std::vector<char> adversarial(n, 0);
  for (auto v : picks) adversarial[v] = 1;

  LearnedSubgraph result;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : psg.successors(u)) {
      if (adversarial[u] || adversarial[v]) result.known_edges.emplace_back(u, v);
    }
  }

  std::vector<NodeId> targets;
  for (NodeId v = 0; v < n; ++v) {
    if (!adversarial[v]) targets.push_back(v);
  }
  std::vector<TargetInference> inferences(targets.size());

  detail::parallel_for(targets.size(), workers, [&](std::size_t i) {
    NodeId target = targets[i];
    auto rng = RngStream::derive(seed, "learn-target", target);
    std::vector<NodeId> candidates = sorted_candidates(bg, target);

    std::vector<NodeId> pinned;
    if (options.elimination) {
      for (NodeId v : psg.successors(target)) {
        if (adversarial[v]) pinned.push_back(v);
      }
      std::sort(pinned.begin(), pinned.end());
      if (pinned.size() > 2) pinned.resize(2);
    }

    TargetInference inf;
    inf.target = target;
    if (pinned.size() >= 2) {
      inf.first = pinned[0];
      inf.second = pinned[1];
      inferences[i] = inf;
      return;
    }

    // Tally every diffuser so second-hop evidence is available when asked.
    std::vector<std::uint64_t> tally(bg.node_count(), 0);
    std::vector<char> visited(psg.node_count(), 0);
    for (std::uint32_t txi = 0; txi < tx_per_node; ++txi) {
      auto diffuser = walk_to_diffusion(psg, target, p_f, rng, visited);
      if (diffuser) ++tally[*diffuser];
    }

    std::vector<std::pair<NodeId, std::uint64_t>> scored;
    scored.reserve(candidates.size());
    for (NodeId c : candidates) {
      std::uint64_t score = tally[c];
      if (options.second_hop) {
        // Direct diffusions count double; diffusions by c's own successors
        // (outside the candidate set) add single-weight evidence.
        score *= 2;
        for (NodeId d : bg.successors(c)) {
          if (d != target && std::find(candidates.begin(), candidates.end(), d) ==
                                 candidates.end()) {
            score += tally[d];
          }
        }
      }
      scored.emplace_back(c, score);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });

    auto pick_rank = [&](std::size_t rank) { return scored[rank].first; };
    if (pinned.size() == 1) {
      inf.first = pinned[0];
      inf.second = pick_rank(0) == pinned[0] ? pick_rank(1) : pick_rank(0);
    } else {
      if (scored.size() < 2) {
        throw InsufficientDataError("fewer than two candidate successors for node " +
                                    std::to_string(target));
      }
      inf.first = pick_rank(0);
      inf.second = pick_rank(1);
    }
    if (scored.size() > 2) {
      inf.confidence_gap = scored[1].second - scored[2].second;
      inf.tie_flagged = scored[1].second == scored[2].second;
    }
    inferences[i] = inf;
  });

  std::set<std::pair<NodeId, NodeId>> derived(result.known_edges.begin(),
                                              result.known_edges.end());
  for (const TargetInference& inf : inferences) {
    result.inferred_edges.emplace_back(inf.target, inf.first);
    result.inferred_edges.emplace_back(inf.target, inf.second);
    derived.emplace(inf.target, inf.first);
    derived.emplace(inf.target, inf.second);
  }
  result.targets = std::move(inferences);

  std::uint64_t true_edges = 0, recovered = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : psg.successors(u)) {
      ++true_edges;
      if (derived.count({u, v})) ++recovered;
    }
  }
  result.accuracy =
      true_edges == 0 ? 0.0 : static_cast<double>(recovered) / static_cast<double>(true_edges);
  return result;
}

}  // namespace p2panon
