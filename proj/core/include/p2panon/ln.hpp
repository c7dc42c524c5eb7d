// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Source-routed payment network model: fee-based best paths, adversarial
// route observations, and originator posteriors from subpath counting.

#ifndef P2PANON_LN_HPP
#define P2PANON_LN_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "p2panon/graph.hpp"
#include "p2panon/posterior.hpp"

namespace p2panon {

/// Risk factor scaling the timelock term of the routing cost. The deployed
/// client uses a constant on the order of 1e-9.
inline constexpr double kDefaultRiskFactor = 1.5e-9;

/// Routing cost of relaying `amount` over a channel direction:
///   amount * proportional_fee_rate + base_fee + amount * timelock * rf + bias.
double edge_cost(double amount, const ChannelPolicy& policy,
                 double rf = kDefaultRiskFactor, double bias = 0.0);

/// A source-to-destination route. Costs accumulate left-to-right along the
/// node sequence so equal routes always carry bit-identical totals.
struct Route {
  std::vector<NodeId> nodes;
  double total_cost = 0.0;

  NodeId source() const { return nodes.front(); }
  NodeId destination() const { return nodes.back(); }
};

/// Minimum-cost route under edge_cost with bias 0. Ties break toward the
/// lexicographically smallest node sequence. Topologies without channel
/// policies route over unit edge weights. Returns nullopt when dst is
/// unreachable.
std::optional<Route> best_path(const Topology& t, NodeId src, NodeId dst, double amount,
                               double risk_factor = kDefaultRiskFactor);

/// The k cheapest loopless routes, best first (Yen), with the same
/// tie-breaking as best_path; fewer are returned if fewer exist.
std::vector<Route> best_k_paths(const Topology& t, NodeId src, NodeId dst, double amount,
                                std::uint32_t k, double risk_factor = kDefaultRiskFactor);

/// Left-to-right total cost of an explicit node sequence.
double route_cost(const Topology& t, std::span<const NodeId> nodes, double amount,
                  double risk_factor = kDefaultRiskFactor);

/// What colluding intermediaries record about one routed transaction: the
/// first and last adversarial intermediaries on the route (equal when there
/// is only one), the predecessor of the first and the successor of the last.
struct LnObservation {
  NodeId predecessor = 0;
  NodeId first_adversary = 0;
  NodeId last_adversary = 0;
  NodeId successor = 0;

  auto operator<=>(const LnObservation&) const = default;
};

/// The observation an adversary derives from a route, or nullopt when no
/// interior node is adversarial. Adversarial endpoints are not
/// intermediaries and produce no observation by themselves.
std::optional<LnObservation> observation_from_route(const Route& route, const Topology& t);

/// Best-k routes for every ordered pair of honest nodes. Unreachable pairs
/// are omitted. A pure function of (topology, amount, k, risk factor).
class PathSet {
 public:
  std::span<const Route> routes(NodeId src, NodeId dst) const;

  /// Routes from src to every destination, as (dst, routes) pairs in
  /// ascending destination order.
  const std::vector<std::pair<NodeId, std::vector<Route>>>& routes_from(NodeId src) const {
    return per_source_[src];
  }

  std::uint64_t total_routes() const { return total_routes_; }
  std::uint64_t routes_originating_at(NodeId src) const { return per_source_totals_[src]; }
  std::uint32_t node_count() const { return static_cast<std::uint32_t>(per_source_.size()); }

 private:
  friend PathSet build_path_set(const Topology&, double, std::uint32_t, double, unsigned);
  std::vector<std::vector<std::pair<NodeId, std::vector<Route>>>> per_source_;
  std::vector<std::uint64_t> per_source_totals_;
  std::uint64_t total_routes_ = 0;
};

PathSet build_path_set(const Topology& t, double amount, std::uint32_t k,
                       double risk_factor = kDefaultRiskFactor, unsigned workers = 1);

/// Indexes a path set by observation for repeated posterior queries.
/// Likelihood of origin i for observation o is (routes from i whose
/// observation is o) / (all routes from i), normalized over origins.
class LnAnalyzer {
 public:
  LnAnalyzer(const PathSet& ps, const Topology& t);

  Posterior posterior(const LnObservation& obs, PriorWeights prior = {}) const;

  /// Origins with at least one route matching the observation exactly.
  std::vector<NodeId> support(const LnObservation& obs) const;

 private:
  struct ObsKey {
    std::uint64_t a, b;
    bool operator==(const ObsKey&) const = default;
  };
  struct ObsKeyHash {
    std::size_t operator()(const ObsKey& k) const {
      std::uint64_t h = k.a * 0x9e3779b97f4a7c15ULL;
      h ^= k.b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  static ObsKey key_of(const LnObservation& o) {
    return {(static_cast<std::uint64_t>(o.predecessor) << 32) | o.first_adversary,
            (static_cast<std::uint64_t>(o.last_adversary) << 32) | o.successor};
  }

  const PathSet* ps_;
  std::unordered_map<ObsKey, std::vector<std::pair<NodeId, std::uint32_t>>, ObsKeyHash>
      matches_by_obs_;
};

/// One-shot convenience wrapper around LnAnalyzer.
Posterior ln_posterior(const PathSet& ps, const Topology& t, const LnObservation& obs,
                       PriorWeights prior = {});

/// Display form "pred|first|last|succ", used as the observation key in
/// reports.
std::string ln_observation_key(const LnObservation& obs);

}  // namespace p2panon

#endif  // P2PANON_LN_HPP
