// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hop-by-hop stem-phase model: transaction walks over the stem overlay,
// adversarial observations, and originator posteriors.
//
// A stem walk starts at the originator, which always forwards; every later
// honest hop forwards with probability p_f to a uniformly chosen successor
// and otherwise diffuses. The walk stops at the first adversarial
// recipient. A node receiving a transaction it has already relayed does not
// relay it again (duplicate suppression), which ends the stem there; the
// analytic path sums therefore range over simple paths only.

#ifndef P2PANON_STEM_HPP
#define P2PANON_STEM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "p2panon/graph.hpp"
#include "p2panon/posterior.hpp"
#include "p2panon/rng.hpp"

namespace p2panon {

/// What the first adversarial node records about an intercepted
/// transaction: itself and the node that forwarded it.
struct StemObservation {
  NodeId adversary = 0;
  NodeId predecessor = 0;

  auto operator<=>(const StemObservation&) const = default;
};

/// Display form "adversary|predecessor", used as the observation key in
/// reports.
std::string stem_observation_key(const StemObservation& obs);

/// Bounds on the stem path enumeration behind Dandelion++ posteriors.
struct PathEnumerationBounds {
  std::uint32_t max_hops = 12;
  double min_contribution = 1e-12;
};

/// max_hops 12 for degree-2 overlays, 5 for wider ones, matching the
/// per-scheme experiment settings.
PathEnumerationBounds default_bounds_for(const Topology& t);

struct StemOutcome {
  enum class Kind : std::uint8_t { Intercepted, Diffused } kind = Kind::Diffused;
  StemObservation observation{};  ///< valid when Intercepted
  NodeId diffuser = 0;            ///< valid when Diffused
  std::uint32_t hops = 0;         ///< edges traversed; always >= 1
};

/// Honest nodes that can originate a transaction first seen at the given
/// adversary on a line overlay: the segment between the previous adversary
/// and this one, walking backward, ordered nearest first.
std::vector<NodeId> partition_of(const Topology& t, NodeId adversary);

/// Line-overlay posterior: partition member at hop distance h carries
/// likelihood p_f^(h-1); nodes outside the partition have probability zero.
Posterior dandelion_posterior(const Topology& t, double p_f, const StemObservation& obs,
                              PriorWeights prior = {});

/// All simple directed paths origin -> ... -> obs.predecessor ->
/// obs.adversary whose interior nodes are honest (another adversary on the
/// path would have intercepted first), at most bounds.max_hops edges long.
/// Ordered lexicographically by node sequence.
std::vector<std::vector<NodeId>> enumerate_stem_paths(const Topology& t, NodeId origin,
                                                      const StemObservation& obs,
                                                      const PathEnumerationBounds& bounds);

/// Probability that a transaction originated by `origin` is first
/// intercepted with the given observation: the sum over valid paths of
/// (1/outdeg at the originator) * prod over interior hops of
/// (p_f/outdeg). Path terms below bounds.min_contribution may be pruned.
double dpp_forward_probability(const Topology& t, NodeId origin, const StemObservation& obs,
                               double p_f, const PathEnumerationBounds& bounds);

/// Forward probabilities for every node at once (index = NodeId), computed
/// by one backward traversal from the observation. Adversarial nodes carry
/// zero.
std::vector<double> dpp_likelihoods(const Topology& t, const StemObservation& obs, double p_f,
                                    const PathEnumerationBounds& bounds);

/// Stem-overlay posterior for degree-limited overlays, normalizing
/// dpp_forward_probability over honest nodes. Honest nodes whose every
/// route to the observation crosses another adversary get exactly zero.
Posterior dpp_posterior(const Topology& t, double p_f, const StemObservation& obs,
                        const PathEnumerationBounds& bounds, PriorWeights prior = {});

/// One seeded stem walk from an honest originator.
StemOutcome simulate_stem_phase(const Topology& t, NodeId originator, double p_f,
                                RngStream& rng);

}  // namespace p2panon

#endif  // P2PANON_STEM_HPP
