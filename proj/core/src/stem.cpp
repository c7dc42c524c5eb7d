// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/stem.hpp"

#include <algorithm>
#include <cmath>

#include "p2panon/errors.hpp"

namespace p2panon {

namespace {

void check_observation(const Topology& t, const StemObservation& obs) {
  if (obs.adversary >= t.node_count() || obs.predecessor >= t.node_count()) {
    throw InvalidParameterError("observation node out of range");
  }
  if (!t.is_adversarial(obs.adversary)) {
    throw InvalidParameterError("observed node is not adversarial");
  }
  auto preds = t.predecessors(obs.adversary);
  if (std::find(preds.begin(), preds.end(), obs.predecessor) == preds.end()) {
    throw InvalidParameterError("observation predecessor has no edge to the adversary");
  }
}

Posterior normalize(std::vector<std::pair<NodeId, double>> likelihoods, PriorWeights prior,
                    std::string key) {
  Posterior post;
  post.observation_key = std::move(key);
  double total = 0.0;
  for (auto& [node, like] : likelihoods) {
    if (!prior.empty()) {
      if (node >= prior.size()) throw InvalidParameterError("prior table too small");
      like *= prior[node];
    }
    if (like > 0.0) {
      post.probabilities.emplace_back(node, like);
      total += like;
    }
  }
  if (total <= 0.0) {
    throw ImpossibleObservationError("all originator likelihoods are zero for observation " +
                                     post.observation_key);
  }
  for (auto& [node, p] : post.probabilities) p /= total;
  return post;
}

}  // namespace

std::string stem_observation_key(const StemObservation& obs) {
  return std::to_string(obs.adversary) + "|" + std::to_string(obs.predecessor);
}

PathEnumerationBounds default_bounds_for(const Topology& t) {
  std::uint32_t max_out = 0;
  for (NodeId v = 0; v < t.node_count(); ++v) max_out = std::max(max_out, t.out_degree(v));
  if (max_out > 4) return {5, 1e-12};
  return {12, 1e-12};
}

std::vector<NodeId> partition_of(const Topology& t, NodeId adversary) {
  if (t.kind() != TopologyKind::Line) {
    throw InvalidParameterError("partitions are defined on line overlays only");
  }
  if (adversary >= t.node_count() || !t.is_adversarial(adversary)) {
    throw InvalidParameterError("partition_of requires an adversarial node");
  }
  std::vector<NodeId> members;
  NodeId current = t.predecessors(adversary)[0];
  while (current != adversary && !t.is_adversarial(current)) {
    members.push_back(current);
    current = t.predecessors(current)[0];
  }
  return members;
}

Posterior dandelion_posterior(const Topology& t, double p_f, const StemObservation& obs,
                              PriorWeights prior) {
  if (p_f <= 0.0 || p_f >= 1.0) throw InvalidParameterError("p_f must lie in (0, 1)");
  check_observation(t, obs);
  if (obs.predecessor != t.predecessors(obs.adversary)[0]) {
    throw InvalidParameterError("observation inconsistent with the line overlay");
  }
  std::vector<NodeId> partition = partition_of(t, obs.adversary);
  if (partition.empty()) {
    throw ImpossibleObservationError(
        "no honest node can reach the adversary first: empty partition at " +
        stem_observation_key(obs));
  }
  std::vector<std::pair<NodeId, double>> likelihoods;
  likelihoods.reserve(partition.size());
  double like = 1.0;  // p_f^(h-1), h = 1 at the immediate predecessor
  for (NodeId member : partition) {
    likelihoods.emplace_back(member, like);
    like *= p_f;
  }
  std::sort(likelihoods.begin(), likelihoods.end());
  return normalize(std::move(likelihoods), prior, stem_observation_key(obs));
}

std::vector<std::vector<NodeId>> enumerate_stem_paths(const Topology& t, NodeId origin,
                                                      const StemObservation& obs,
                                                      const PathEnumerationBounds& bounds) {
  check_observation(t, obs);
  if (origin >= t.node_count() || t.is_adversarial(origin)) {
    throw InvalidParameterError("path enumeration requires an honest origin");
  }
  std::vector<std::vector<NodeId>> result;
  std::vector<NodeId> path{origin};
  std::vector<char> on_path(t.node_count(), 0);
  on_path[origin] = 1;

  // The predecessor is the second-to-last node of every valid path, so a
  // branch that reaches it either closes with the adversary or dies.
  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (v == obs.predecessor) {
      if (path.size() <= bounds.max_hops) {  // hops = path.size() after appending adversary
        auto full = path;
        full.push_back(obs.adversary);
        result.push_back(std::move(full));
      }
      return;
    }
    if (path.size() >= bounds.max_hops) return;
    std::vector<NodeId> next(t.successors(v).begin(), t.successors(v).end());
    std::sort(next.begin(), next.end());
    for (NodeId u : next) {
      if (on_path[u] || t.is_adversarial(u)) continue;
      on_path[u] = 1;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[u] = 0;
    }
  };
  dfs(dfs, origin);
  return result;
}

double dpp_forward_probability(const Topology& t, NodeId origin, const StemObservation& obs,
                               double p_f, const PathEnumerationBounds& bounds) {
  auto paths = enumerate_stem_paths(t, origin, obs, bounds);
  double total = 0.0;
  for (const auto& path : paths) {
    double term = 1.0 / static_cast<double>(t.out_degree(path[0]));
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      term *= p_f / static_cast<double>(t.out_degree(path[i]));
    }
    if (term >= bounds.min_contribution) total += term;
  }
  return total;
}

std::vector<double> dpp_likelihoods(const Topology& t, const StemObservation& obs, double p_f,
                                    const PathEnumerationBounds& bounds) {
  check_observation(t, obs);
  std::vector<double> like(t.node_count(), 0.0);
  if (t.is_adversarial(obs.predecessor)) return like;

  std::vector<char> on_path(t.node_count(), 0);
  // Walk the reverse graph from the predecessor. A backward path
  // [p, v1, ..., vd] mirrors the forward path [vd, ..., v1, p, adversary];
  // `weight` carries prod over {p, v1, ..., v(d-1)} of p_f/outdeg.
  auto dfs = [&](auto&& self, NodeId v, std::uint32_t depth, double weight) -> void {
    like[v] += weight / static_cast<double>(t.out_degree(v));
    if (depth >= bounds.max_hops) return;
    double deeper = weight * p_f / static_cast<double>(t.out_degree(v));
    if (deeper < bounds.min_contribution) return;
    on_path[v] = 1;
    for (NodeId u : t.predecessors(v)) {
      if (on_path[u] || t.is_adversarial(u)) continue;
      self(self, u, depth + 1, deeper);
    }
    on_path[v] = 0;
  };
  dfs(dfs, obs.predecessor, 1, 1.0);
  return like;
}

Posterior dpp_posterior(const Topology& t, double p_f, const StemObservation& obs,
                        const PathEnumerationBounds& bounds, PriorWeights prior) {
  if (p_f <= 0.0 || p_f >= 1.0) throw InvalidParameterError("p_f must lie in (0, 1)");
  std::vector<double> like = dpp_likelihoods(t, obs, p_f, bounds);
  std::vector<std::pair<NodeId, double>> support;
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (like[v] > 0.0) support.emplace_back(v, like[v]);
  }
  return normalize(std::move(support), prior, stem_observation_key(obs));
}

StemOutcome simulate_stem_phase(const Topology& t, NodeId originator, double p_f,
                                RngStream& rng) {
  if (originator >= t.node_count() || t.is_adversarial(originator)) {
    throw InvalidParameterError("originator must be an honest node");
  }
  if (p_f < 0.0 || p_f >= 1.0) throw InvalidParameterError("p_f must lie in [0, 1)");

  std::vector<char> visited(t.node_count(), 0);
  visited[originator] = 1;
  NodeId current = originator;
  std::uint32_t hops = 0;
  bool first = true;
  for (;;) {
    auto succ = t.successors(current);
    if (succ.empty()) return {StemOutcome::Kind::Diffused, {}, current, std::max(hops, 1u)};
    if (!first && !rng.next_bernoulli(p_f)) {
      return {StemOutcome::Kind::Diffused, {}, current, hops};
    }
    NodeId next = succ[rng.next_index(succ.size())];
    NodeId prev = current;
    ++hops;
    if (t.is_adversarial(next)) {
      return {StemOutcome::Kind::Intercepted, {next, prev}, 0, hops};
    }
    if (visited[next]) {
      // Duplicate suppression: the recipient has already relayed this
      // transaction and will not relay it again, ending the stem.
      return {StemOutcome::Kind::Diffused, {}, next, hops};
    }
    visited[next] = 1;
    current = next;
    first = false;
  }
}

}  // namespace p2panon
