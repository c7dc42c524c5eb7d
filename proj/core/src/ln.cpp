// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/ln.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>

#include "p2panon/errors.hpp"
#include "parallel.hpp"
#include "routing_internal.hpp"

namespace p2panon {

double edge_cost(double amount, const ChannelPolicy& policy, double rf, double bias) {
  if (amount < 0) throw InvalidParameterError("amount must be non-negative");
  return amount * policy.proportional_fee_rate + policy.base_fee +
         amount * policy.timelock * rf + bias;
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weight_of(const Topology& t, NodeId u, std::size_t edge_idx, double amount, double rf) {
  if (!t.has_policies()) return 1.0;
  return edge_cost(amount, t.policies(u)[edge_idx], rf, 0.0);
}

}  // namespace

void reconstruct(const Tree& tree, NodeId src, NodeId v, std::vector<NodeId>& out) {
  out.clear();
  for (NodeId x = v;; x = tree.parent[x]) {
    out.push_back(x);
    if (x == src) break;
  }
  std::reverse(out.begin(), out.end());
}

// Nodes are re-relaxed when an equal-cost, lexicographically smaller path
// arrives, so improvements propagate downstream. Lexicographic order is
// well-founded, hence the loop terminates.
Tree dijkstra(const Topology& t, NodeId src, double amount, double rf,
              const std::vector<char>* banned_nodes,
              const EdgeBan* banned_edges) {
  const std::uint32_t n = t.node_count();
  Tree tree{std::vector<double>(n, kInf), std::vector<NodeId>(n, src),
            std::vector<char>(n, 0)};
  tree.dist[src] = 0.0;
  tree.reached[src] = 1;

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.emplace(0.0, src);

  std::vector<NodeId> cand_path, inc_path;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > tree.dist[u]) continue;
    auto succ = t.successors(u);
    for (std::size_t idx = 0; idx < succ.size(); ++idx) {
      NodeId v = succ[idx];
      if (banned_nodes && (*banned_nodes)[v]) continue;
      if (banned_edges && banned_edges->contains(u, v)) continue;
      double nd = tree.dist[u] + weight_of(t, u, idx, amount, rf);
      if (!tree.reached[v] || nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.parent[v] = u;
        tree.reached[v] = 1;
        pq.emplace(nd, v);
      } else if (nd == tree.dist[v] && tree.parent[v] != u) {
        reconstruct(tree, src, u, cand_path);
        cand_path.push_back(v);
        reconstruct(tree, src, v, inc_path);
        if (std::lexicographical_compare(cand_path.begin(), cand_path.end(),
                                         inc_path.begin(), inc_path.end())) {
          tree.parent[v] = u;
          pq.emplace(nd, v);
        }
      }
    }
  }
  return tree;
}

}  // namespace detail

namespace {

using detail::dijkstra;
using detail::EdgeBan;
using detail::reconstruct;
using detail::Tree;

struct RouteLess {
  bool operator()(const Route& a, const Route& b) const {
    if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
    return a.nodes < b.nodes;
  }
};

}  // namespace

double route_cost(const Topology& t, std::span<const NodeId> nodes, double amount,
                  double risk_factor) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto succ = t.successors(nodes[i]);
    auto it = std::find(succ.begin(), succ.end(), nodes[i + 1]);
    if (it == succ.end()) throw InvalidParameterError("route uses a missing edge");
    if (t.has_policies()) {
      total += edge_cost(amount, t.policies(nodes[i])[static_cast<std::size_t>(it - succ.begin())],
                         risk_factor, 0.0);
    } else {
      total += 1.0;
    }
  }
  return total;
}

std::optional<Route> best_path(const Topology& t, NodeId src, NodeId dst, double amount,
                               double risk_factor) {
  if (src == dst) throw InvalidParameterError("source equals destination");
  if (src >= t.node_count() || dst >= t.node_count()) {
    throw InvalidParameterError("route endpoint out of range");
  }
  Tree tree = dijkstra(t, src, amount, risk_factor);
  if (!tree.reached[dst]) return std::nullopt;
  Route r;
  reconstruct(tree, src, dst, r.nodes);
  r.total_cost = route_cost(t, r.nodes, amount, risk_factor);
  return r;
}

std::vector<Route> best_k_paths(const Topology& t, NodeId src, NodeId dst, double amount,
                                std::uint32_t k, double risk_factor) {
  if (k < 1) throw InvalidParameterError("k must be at least 1");
  auto first = best_path(t, src, dst, amount, risk_factor);
  if (!first) return {};
  std::vector<Route> found{std::move(*first)};
  if (k == 1) return found;

  std::set<Route, RouteLess> candidates;
  std::vector<NodeId> spur_nodes;
  while (found.size() < k) {
    const Route& prev = found.back();
    for (std::size_t j = 0; j + 1 < prev.nodes.size(); ++j) {
      NodeId spur = prev.nodes[j];

      std::vector<char> banned_nodes(t.node_count(), 0);
      for (std::size_t m = 0; m < j; ++m) banned_nodes[prev.nodes[m]] = 1;
      EdgeBan banned_edges;
      for (const Route& a : found) {
        if (a.nodes.size() > j + 1 &&
            std::equal(a.nodes.begin(), a.nodes.begin() + static_cast<std::ptrdiff_t>(j + 1),
                       prev.nodes.begin())) {
          banned_edges.add(a.nodes[j], a.nodes[j + 1]);
        }
      }

      Tree tree = dijkstra(t, spur, amount, risk_factor, &banned_nodes, &banned_edges);
      if (!tree.reached[dst]) continue;
      reconstruct(tree, spur, dst, spur_nodes);

      Route cand;
      cand.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + static_cast<std::ptrdiff_t>(j));
      cand.nodes.insert(cand.nodes.end(), spur_nodes.begin(), spur_nodes.end());
      cand.total_cost = route_cost(t, cand.nodes, amount, risk_factor);
      candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

std::optional<LnObservation> observation_from_route(const Route& route, const Topology& t) {
  if (route.nodes.size() < 2) throw InvalidParameterError("route too short");
  std::size_t first = 0, last = 0;
  bool seen = false;
  for (std::size_t i = 1; i + 1 < route.nodes.size(); ++i) {
    if (t.is_adversarial(route.nodes[i])) {
      if (!seen) first = i;
      last = i;
      seen = true;
    }
  }
  if (!seen) return std::nullopt;
  return LnObservation{route.nodes[first - 1], route.nodes[first], route.nodes[last],
                       route.nodes[last + 1]};
}

std::span<const Route> PathSet::routes(NodeId src, NodeId dst) const {
  const auto& list = per_source_[src];
  auto it = std::lower_bound(list.begin(), list.end(), dst,
                             [](const auto& e, NodeId d) { return e.first < d; });
  if (it == list.end() || it->first != dst) return {};
  return it->second;
}

PathSet build_path_set(const Topology& t, double amount, std::uint32_t k,
                       double risk_factor, unsigned workers) {
  if (k < 1) throw InvalidParameterError("k must be at least 1");
  const std::uint32_t n = t.node_count();
  PathSet ps;
  ps.per_source_.resize(n);
  ps.per_source_totals_.assign(n, 0);

  std::vector<NodeId> honest = t.honest_nodes();
  detail::parallel_for(honest.size(), workers, [&](std::size_t i) {
    NodeId src = honest[i];
    auto& out = ps.per_source_[src];
    if (k == 1) {
      Tree tree = dijkstra(t, src, amount, risk_factor);
      for (NodeId dst : honest) {
        if (dst == src || !tree.reached[dst]) continue;
        Route r;
        reconstruct(tree, src, dst, r.nodes);
        r.total_cost = route_cost(t, r.nodes, amount, risk_factor);
        out.emplace_back(dst, std::vector<Route>{std::move(r)});
      }
    } else {
      for (NodeId dst : honest) {
        if (dst == src) continue;
        auto routes = best_k_paths(t, src, dst, amount, k, risk_factor);
        if (!routes.empty()) out.emplace_back(dst, std::move(routes));
      }
    }
  });

  for (NodeId src = 0; src < n; ++src) {
    for (const auto& [dst, routes] : ps.per_source_[src]) {
      ps.per_source_totals_[src] += routes.size();
    }
    ps.total_routes_ += ps.per_source_totals_[src];
  }
  return ps;
}

LnAnalyzer::LnAnalyzer(const PathSet& ps, const Topology& t) : ps_(&ps) {
  std::unordered_map<ObsKey, std::unordered_map<NodeId, std::uint32_t>, ObsKeyHash> acc;
  for (NodeId src = 0; src < ps.node_count(); ++src) {
    for (const auto& [dst, routes] : ps.routes_from(src)) {
      for (const Route& r : routes) {
        auto obs = observation_from_route(r, t);
        if (obs) acc[key_of(*obs)][src] += 1;
      }
    }
  }
  matches_by_obs_.reserve(acc.size());
  for (auto& [key, per_origin] : acc) {
    std::vector<std::pair<NodeId, std::uint32_t>> flat(per_origin.begin(), per_origin.end());
    std::sort(flat.begin(), flat.end());
    matches_by_obs_.emplace(key, std::move(flat));
  }
}

Posterior LnAnalyzer::posterior(const LnObservation& obs, PriorWeights prior) const {
  auto it = matches_by_obs_.find(key_of(obs));
  if (it == matches_by_obs_.end()) {
    throw ImpossibleObservationError("no route in the path set matches observation " +
                                     ln_observation_key(obs));
  }
  Posterior post;
  post.observation_key = ln_observation_key(obs);
  post.probabilities.reserve(it->second.size());
  double total = 0.0;
  for (const auto& [origin, count] : it->second) {
    double like = static_cast<double>(count) /
                  static_cast<double>(ps_->routes_originating_at(origin));
    if (!prior.empty()) {
      if (origin >= prior.size()) throw InvalidParameterError("prior table too small");
      like *= prior[origin];
    }
    if (like > 0.0) {
      post.probabilities.emplace_back(origin, like);
      total += like;
    }
  }
  if (total <= 0.0) {
    throw ImpossibleObservationError("all originator likelihoods are zero for observation " +
                                     ln_observation_key(obs));
  }
  for (auto& [origin, p] : post.probabilities) p /= total;
  return post;
}

std::vector<NodeId> LnAnalyzer::support(const LnObservation& obs) const {
  auto it = matches_by_obs_.find(key_of(obs));
  if (it == matches_by_obs_.end()) return {};
  std::vector<NodeId> out;
  out.reserve(it->second.size());
  for (const auto& [origin, count] : it->second) out.push_back(origin);
  return out;
}

Posterior ln_posterior(const PathSet& ps, const Topology& t, const LnObservation& obs,
                       PriorWeights prior) {
  return LnAnalyzer(ps, t).posterior(obs, prior);
}

std::string ln_observation_key(const LnObservation& obs) {
  return std::to_string(obs.predecessor) + "|" + std::to_string(obs.first_adversary) + "|" +
         std::to_string(obs.last_adversary) + "|" + std::to_string(obs.successor);
}

}  // namespace p2panon
