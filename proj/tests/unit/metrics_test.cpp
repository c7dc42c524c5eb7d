// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "p2panon/errors.hpp"
#include "p2panon/metrics.hpp"
#include "p2panon/rng.hpp"

using namespace p2panon;

namespace {

Posterior make_posterior(std::vector<std::pair<NodeId, double>> probs) {
  Posterior p;
  p.probabilities = std::move(probs);
  std::sort(p.probabilities.begin(), p.probabilities.end());
  return p;
}

}  // namespace

TEST_CASE("shannon entropy of uniform and point-mass distributions") {
  std::vector<std::pair<NodeId, double>> uniform;
  for (NodeId v = 0; v < 8; ++v) uniform.emplace_back(v, 0.125);
  CHECK(shannon_entropy(make_posterior(uniform)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(shannon_entropy(make_posterior({{5, 1.0}})) == doctest::Approx(0.0));
}

TEST_CASE("shannon entropy of a two-to-one split") {
  double h = shannon_entropy(make_posterior({{0, 2.0 / 3.0}, {1, 1.0 / 3.0}}));
  CHECK(h == doctest::Approx(0.9182958340544896).epsilon(1e-12));
}

TEST_CASE("entropy rejects unnormalized input") {
  CHECK_THROWS_AS(shannon_entropy(make_posterior({{0, 0.5}, {1, 0.4}})),
                  InvariantViolationError);
}

TEST_CASE("min entropy is determined by the likeliest suspect") {
  std::vector<std::pair<NodeId, double>> uniform;
  for (NodeId v = 0; v < 8; ++v) uniform.emplace_back(v, 0.125);
  CHECK(min_entropy(make_posterior(uniform)) == doctest::Approx(3.0));
  CHECK(min_entropy(make_posterior({{0, 0.5}, {1, 0.49}, {2, 0.01}})) == doctest::Approx(1.0));
}

TEST_CASE("min entropy never exceeds shannon entropy") {
  auto rng = RngStream::derive(7, "metrics-prop");
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t size = 1 + rng.next_index(20);
    std::vector<std::pair<NodeId, double>> probs;
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      double w = rng.next_unit() + 1e-6;
      probs.emplace_back(static_cast<NodeId>(i), w);
      total += w;
    }
    for (auto& [node, w] : probs) w /= total;
    Posterior p = make_posterior(probs);
    CHECK(min_entropy(p) <= shannon_entropy(p) + 1e-9);
  }
}

TEST_CASE("entropy is invariant under permutation and zero-probability padding") {
  Posterior p = make_posterior({{0, 0.7}, {1, 0.2}, {2, 0.1}});
  Posterior shuffled = make_posterior({{9, 0.1}, {4, 0.7}, {6, 0.2}});
  CHECK(shannon_entropy(p) == doctest::Approx(shannon_entropy(shuffled)).epsilon(1e-15));

  Posterior padded = make_posterior({{0, 0.7}, {1, 0.2}, {2, 0.1}, {3, 0.0}, {4, 0.0}});
  CHECK(shannon_entropy(padded) == doctest::Approx(shannon_entropy(p)).epsilon(1e-15));
}

TEST_CASE("effective anonymity set size") {
  CHECK(effective_anonymity_set(5.0) == doctest::Approx(32.0));
  CHECK(effective_anonymity_set(0.0) == doctest::Approx(1.0));
  CHECK(effective_anonymity_set(3.0) == doctest::Approx(8.0));
}

TEST_CASE("summarize computes interpolated quartiles") {
  std::vector<double> three{1.0, 2.0, 3.0};
  CHECK(summarize(three).median == doctest::Approx(2.0));

  std::vector<double> zeros{0.0, 0.0, 0.0, 0.0};
  Summary z = summarize(zeros);
  CHECK(z.min == 0.0);
  CHECK(z.q1 == 0.0);
  CHECK(z.median == 0.0);
  CHECK(z.q3 == 0.0);
  CHECK(z.max == 0.0);
  CHECK(z.mean == 0.0);

  std::vector<double> four{1.0, 2.0, 3.0, 4.0};
  Summary s = summarize(four);
  CHECK(s.q1 == doctest::Approx(1.75));
  CHECK(s.q3 == doctest::Approx(3.25));
  CHECK(s.median == doctest::Approx(2.5));
}

TEST_CASE("summarize is order independent") {
  auto rng = RngStream::derive(11, "summarize-prop");
  std::vector<double> samples;
  for (int i = 0; i < 101; ++i) samples.push_back(rng.next_unit() * 10);
  Summary sorted_summary = summarize(samples);
  std::vector<double> shuffled = samples;
  rng.shuffle(shuffled);
  Summary shuffled_summary = summarize(shuffled);
  CHECK(sorted_summary.median == shuffled_summary.median);
  CHECK(sorted_summary.q1 == shuffled_summary.q1);
  CHECK(sorted_summary.q3 == shuffled_summary.q3);
  CHECK(sorted_summary.mean == shuffled_summary.mean);
}

TEST_CASE("summarize rejects empty input") {
  CHECK_THROWS_AS(summarize({}), EmptyInputError);
}

TEST_CASE("intercept fraction") {
  CHECK(intercept_fraction(715, 1000) == doctest::Approx(0.715));
  CHECK(intercept_fraction(0, 10) == 0.0);
  CHECK(intercept_fraction(10, 10) == 1.0);
  CHECK_THROWS_AS(intercept_fraction(0, 0), EmptyInputError);
}
