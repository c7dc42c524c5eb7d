// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "p2panon/errors.hpp"
#include "p2panon/generators.hpp"
#include "p2panon/graph_ops.hpp"
#include "p2panon/metrics.hpp"
#include "p2panon/stem.hpp"
#include "support/oracles.hpp"

using namespace p2panon;

namespace {

/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with the given adversaries.
Topology make_cycle(std::uint32_t n, const std::vector<NodeId>& adversaries) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return test::make_graph(n, edges, TopologyKind::Line, adversaries);
}

/// S(0) -> {X(1), A(2)}, X(1) -> {A(2), S(0)}; A adversarial.
Topology make_sxa() {
  return test::make_graph(3, {{0, 1}, {0, 2}, {1, 2}, {1, 0}}, TopologyKind::Quasi4Regular, {2});
}

constexpr PathEnumerationBounds kExact{32, 0.0};

}  // namespace

TEST_CASE("partition_of walks back to the previous adversary") {
  // 0 -> 1 -> 2 -> A3 -> 4 -> 5 -> A6 -> 0
  Topology t = make_cycle(7, {3, 6});
  CHECK(partition_of(t, 3) == std::vector<NodeId>{2, 1, 0});
  CHECK(partition_of(t, 6) == std::vector<NodeId>{5, 4});
  CHECK_THROWS_AS(partition_of(t, 2), InvalidParameterError);
}

TEST_CASE("a single adversary owns the whole circle") {
  Topology t = make_cycle(9, {4});
  auto partition = partition_of(t, 4);
  CHECK(partition.size() == 8);
  CHECK(partition.front() == 3);
  CHECK(partition.back() == 5);
}

TEST_CASE("dandelion posterior on the 5-cycle") {
  // 0 -> 1 -> 2 -> 3 -> 4 -> 0, adversary {3}, p_f = 0.5.
  Topology t = make_cycle(5, {3});
  Posterior post = dandelion_posterior(t, 0.5, {3, 2});
  CHECK(post.probability(2) == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
  CHECK(post.probability(1) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
  CHECK(post.probability(0) == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
  CHECK(post.probability(4) == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(shannon_entropy(post) == doctest::Approx(1.6403).epsilon(1e-4));
}

TEST_CASE("single-member partition pins the originator") {
  // 0 -> A1 -> 2 -> A3 -> 0: partition of A1 is just {0}.
  Topology t = make_cycle(4, {1, 3});
  Posterior post = dandelion_posterior(t, 0.7, {1, 0});
  CHECK(post.support_size() == 1);
  CHECK(post.probability(0) == doctest::Approx(1.0));
  CHECK(shannon_entropy(post) == doctest::Approx(0.0));
}

TEST_CASE("the predecessor is always the likeliest dandelion suspect") {
  for (double p_f : {0.1, 0.5, 0.9, 0.99}) {
    Topology t = make_cycle(12, {7, 11});
    Posterior post = dandelion_posterior(t, p_f, {7, 6});
    NodeId argmax = post.probabilities.front().first;
    double best = 0.0;
    for (const auto& [node, prob] : post.probabilities) {
      if (prob > best) {
        best = prob;
        argmax = node;
      }
    }
    CHECK(argmax == 6);
  }
}

TEST_CASE("dandelion likelihood decreases with hop distance") {
  Topology t = make_cycle(10, {9});
  Posterior post = dandelion_posterior(t, 0.8, {9, 8});
  auto partition = partition_of(t, 9);
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    CHECK(post.probability(partition[i]) > post.probability(partition[i + 1]));
  }
}

TEST_CASE("adjacent adversaries make the observation impossible") {
  Topology t = make_cycle(5, {2, 3});
  CHECK_THROWS_AS(dandelion_posterior(t, 0.5, {3, 2}), ImpossibleObservationError);
}

TEST_CASE("enumerate_stem_paths on the 3-node stem overlay") {
  Topology t = make_sxa();
  StemObservation obs{2, 1};

  auto from_s = enumerate_stem_paths(t, 0, obs, kExact);
  REQUIRE(from_s.size() == 1);
  CHECK(from_s[0] == std::vector<NodeId>{0, 1, 2});

  auto from_x = enumerate_stem_paths(t, 1, obs, kExact);
  REQUIRE(from_x.size() == 1);
  CHECK(from_x[0] == std::vector<NodeId>{1, 2});
}

TEST_CASE("stem paths through another adversary are excluded") {
  // 0 -> {1, 3}, 1 -> {2}, 3 -> {1}: with 3 adversarial, 0 reaches pred 1
  // directly only.
  Topology t = test::make_graph(4, {{0, 1}, {0, 3}, {1, 2}, {3, 1}},
                                TopologyKind::Quasi4Regular, {2, 3});
  auto paths = enumerate_stem_paths(t, 0, {2, 1}, kExact);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("dpp forward probability on the 3-node overlay") {
  Topology t = make_sxa();
  StemObservation obs{2, 1};
  CHECK(dpp_forward_probability(t, 0, obs, 0.9, kExact) == doctest::Approx(0.225).epsilon(1e-12));
  CHECK(dpp_forward_probability(t, 1, obs, 0.9, kExact) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("origins with no valid path have zero forward probability") {
  // 0 -> {1}, 1 -> {2}; node 3 feeds 0 but nothing reaches it back.
  Topology t = test::make_graph(4, {{0, 1}, {1, 2}, {3, 0}}, TopologyKind::Quasi4Regular, {2});
  CHECK(dpp_forward_probability(t, 3, {2, 1}, 0.9, PathEnumerationBounds{2, 0.0}) == 0.0);
}

TEST_CASE("doubling p_f scales a length-h path term by 2^(h-1)") {
  // Chain 0 -> 1 -> 2 -> 3 -> A4, outdegree 1 everywhere: single path, h=4.
  Topology t = test::make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}},
                                TopologyKind::Quasi4Regular, {4});
  StemObservation obs{4, 3};
  double low = dpp_forward_probability(t, 0, obs, 0.3, kExact);
  double high = dpp_forward_probability(t, 0, obs, 0.6, kExact);
  CHECK(high / low == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("dpp posterior on the 3-node overlay") {
  Topology t = make_sxa();
  Posterior post = dpp_posterior(t, 0.9, {2, 1}, kExact);
  CHECK(post.probability(1) == doctest::Approx(0.5 / 0.725).epsilon(1e-12));
  CHECK(post.probability(0) == doctest::Approx(0.225 / 0.725).epsilon(1e-12));
  CHECK(shannon_entropy(post) == doctest::Approx(0.8935).epsilon(1e-4));
}

TEST_CASE("honest nodes walled off by adversaries get exactly zero") {
  // Cluster {0..3} connects outward only through adversaries 4 and 5;
  // cluster {6..11} feeds adversary 12.
  Topology t = test::make_graph(
      13,
      {{0, 1}, {0, 4}, {1, 2}, {1, 5}, {2, 3}, {2, 4}, {3, 5}, {3, 0},
       {4, 6}, {4, 7}, {5, 8}, {5, 9},
       {6, 7}, {6, 12}, {7, 8}, {7, 12}, {8, 9}, {8, 6}, {9, 10}, {9, 6},
       {10, 11}, {10, 7}, {11, 6}, {11, 8}},
      TopologyKind::Quasi4Regular, {4, 5, 12});
  Posterior post = dpp_posterior(t, 0.9, {12, 6}, kExact);
  for (NodeId walled : {0u, 1u, 2u, 3u}) {
    CHECK(post.probability(walled) == 0.0);
  }
  CHECK(post.probability(6) > 0.0);
}

TEST_CASE("isomorphic origins receive equal probability") {
  // 0 and 1 both feed {2, 4}; 2 -> {3, 4}; 4 -> {0, 1}. Adversary 3.
  Topology t = test::make_graph(
      5, {{0, 2}, {0, 4}, {1, 2}, {1, 4}, {2, 3}, {2, 4}, {4, 0}, {4, 1}},
      TopologyKind::Quasi4Regular, {3});
  Posterior post = dpp_posterior(t, 0.8, {3, 2}, kExact);
  CHECK(post.probability(0) == doctest::Approx(post.probability(1)).epsilon(1e-12));
}

TEST_CASE("forward and backward likelihood computations agree") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Topology t = generate_quasi_4_regular(9, seed);
    t = assign_adversaries(t, AdversaryStrategy::Random, 2, seed + 100);
    for (NodeId adversary : t.adversaries()) {
      for (NodeId pred : t.predecessors(adversary)) {
        if (t.is_adversarial(pred)) continue;
        StemObservation obs{adversary, pred};
        auto like = dpp_likelihoods(t, obs, 0.9, kExact);
        for (NodeId origin = 0; origin < t.node_count(); ++origin) {
          if (t.is_adversarial(origin)) continue;
          CHECK(like[origin] ==
                doctest::Approx(dpp_forward_probability(t, origin, obs, 0.9, kExact))
                    .epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("dpp likelihoods equal the exhaustive decision tree") {
  const PathEnumerationBounds bounds{6, 0.0};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::uint32_t n = 6 + seed % 5;
    Topology t = generate_quasi_4_regular(n, seed);
    t = assign_adversaries(t, AdversaryStrategy::Random, 1 + seed % 3, seed + 50);
    for (NodeId origin = 0; origin < n; ++origin) {
      if (t.is_adversarial(origin)) continue;
      auto oracle = test::stem_decision_tree(t, origin, 0.9, bounds.max_hops);
      for (NodeId adversary : t.adversaries()) {
        for (NodeId pred : t.predecessors(adversary)) {
          if (t.is_adversarial(pred)) continue;
          StemObservation obs{adversary, pred};
          double expected = 0.0;
          if (auto it = oracle.find(obs); it != oracle.end()) expected = it->second;
          double got = dpp_forward_probability(t, origin, obs, 0.9, bounds);
          CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("dandelion posterior equals the exhaustive decision tree") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    std::uint32_t n = 6 + seed % 5;
    Topology t = generate_line_graph(n, seed);
    t = assign_adversaries(t, AdversaryStrategy::Random, 1 + seed % 2, seed + 31);

    std::map<StemObservation, std::map<NodeId, double>> by_obs;
    for (NodeId origin = 0; origin < n; ++origin) {
      if (t.is_adversarial(origin)) continue;
      for (const auto& [obs, prob] : test::stem_decision_tree(t, origin, 0.6, n + 2)) {
        by_obs[obs][origin] = prob;
      }
    }
    for (const auto& [obs, per_origin] : by_obs) {
      double total = 0.0;
      for (const auto& [origin, prob] : per_origin) total += prob;
      Posterior post = dandelion_posterior(t, 0.6, obs);
      CHECK(post.support_size() == per_origin.size());
      for (const auto& [origin, prob] : per_origin) {
        CHECK(post.probability(origin) == doctest::Approx(prob / total).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("posteriors are normalized and bounded by log2 of the honest count") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Topology t = generate_quasi_4_regular(40, seed);
    t = assign_adversaries(t, AdversaryStrategy::Random, 6, seed);
    for (NodeId adversary : t.adversaries()) {
      for (NodeId pred : t.predecessors(adversary)) {
        if (t.is_adversarial(pred)) continue;
        Posterior post = dpp_posterior(t, 0.9, {adversary, pred}, default_bounds_for(t));
        double total = 0.0;
        for (const auto& [node, p] : post.probabilities) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(shannon_entropy(post) <= std::log2(t.honest_count()) + 1e-9);
      }
    }
  }
}

TEST_CASE("nodes outside the partition have probability exactly zero") {
  Topology t = make_cycle(15, {3, 9});
  Posterior post = dandelion_posterior(t, 0.9, {9, 8});
  auto partition = partition_of(t, 9);
  std::set<NodeId> inside(partition.begin(), partition.end());
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (!inside.count(v)) CHECK(post.probability(v) == 0.0);
  }
}

TEST_CASE("uniform explicit priors match the reduced form") {
  Topology line = make_cycle(11, {5});
  std::vector<double> uniform(line.node_count(), 1.0 / line.honest_count());
  Posterior with_prior = dandelion_posterior(line, 0.8, {5, 4}, uniform);
  Posterior without = dandelion_posterior(line, 0.8, {5, 4});
  REQUIRE(with_prior.support_size() == without.support_size());
  for (const auto& [node, p] : without.probabilities) {
    CHECK(with_prior.probability(node) == doctest::Approx(p).epsilon(1e-12));
  }

  Topology q4 = assign_adversaries(generate_quasi_4_regular(20, 5),
                                   AdversaryStrategy::Random, 3, 17);
  for (NodeId adversary : q4.adversaries()) {
    for (NodeId pred : q4.predecessors(adversary)) {
      if (q4.is_adversarial(pred)) continue;
      std::vector<double> u(q4.node_count(), 0.25);
      Posterior a = dpp_posterior(q4, 0.9, {adversary, pred}, kExact, u);
      Posterior b = dpp_posterior(q4, 0.9, {adversary, pred}, kExact);
      for (const auto& [node, p] : b.probabilities) {
        CHECK(a.probability(node) == doctest::Approx(p).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a non-uniform prior reweights the posterior") {
  Topology t = make_cycle(5, {3});
  std::vector<double> prior(5, 0.0);
  prior[2] = 1.0;
  Posterior post = dandelion_posterior(t, 0.5, {3, 2}, prior);
  CHECK(post.support_size() == 1);
  CHECK(post.probability(2) == doctest::Approx(1.0));
}

TEST_CASE("stem simulation with p_f = 0 stops at the first intermediary") {
  Topology t = make_cycle(5, {});
  auto rng = RngStream::derive(0, "pf0");
  StemOutcome outcome = simulate_stem_phase(t, 0, 0.0, rng);
  CHECK(outcome.kind == StemOutcome::Kind::Diffused);
  CHECK(outcome.hops == 1);
  CHECK(outcome.diffuser == 1);

  Topology with_adv = make_cycle(5, {1});
  auto rng2 = RngStream::derive(0, "pf0-adv");
  StemOutcome hit = simulate_stem_phase(with_adv, 0, 0.0, rng2);
  CHECK(hit.kind == StemOutcome::Kind::Intercepted);
  CHECK(hit.hops == 1);
  CHECK(hit.observation.adversary == 1);
  CHECK(hit.observation.predecessor == 0);
}

TEST_CASE("stem length follows the geometric law") {
  Topology t = make_cycle(1000, {});
  double total_hops = 0.0;
  const int runs = 100000;
  for (int i = 0; i < runs; ++i) {
    auto rng = RngStream::derive(12345, "geom", static_cast<std::uint64_t>(i));
    StemOutcome outcome = simulate_stem_phase(t, i % 1000, 0.5, rng);
    total_hops += outcome.hops;
  }
  CHECK(total_hops / runs == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("monte carlo interception matches the analytic forward probability") {
  Topology t = make_sxa();
  StemObservation target{2, 1};
  const int runs = 1000000;
  int hits = 0;
  for (int i = 0; i < runs; ++i) {
    auto rng = RngStream::derive(777, "mc", static_cast<std::uint64_t>(i));
    StemOutcome outcome = simulate_stem_phase(t, 0, 0.9, rng);
    if (outcome.kind == StemOutcome::Kind::Intercepted && outcome.observation == target) ++hits;
  }
  double expected = dpp_forward_probability(t, 0, target, 0.9, kExact);
  double sigma = std::sqrt(expected * (1 - expected) / runs);
  CHECK(std::abs(hits / static_cast<double>(runs) - expected) < 3 * sigma);
}

TEST_CASE("default bounds select the deep limit only for narrow overlays") {
  CHECK(default_bounds_for(generate_quasi_4_regular(20, 0)).max_hops == 12);
  CHECK(default_bounds_for(generate_k_regular(40, 16, 0)).max_hops == 5);
}
