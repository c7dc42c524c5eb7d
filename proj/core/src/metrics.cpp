// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "p2panon/errors.hpp"

namespace p2panon {

namespace {

void check_normalized(const Posterior& p) {
  double total = 0.0;
  for (const auto& [node, prob] : p.probabilities) total += prob;
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvariantViolationError("posterior is not normalized (sum = " +
                                  std::to_string(total) + ")");
  }
}

}  // namespace

double shannon_entropy(const Posterior& p) {
  check_normalized(p);
  double h = 0.0;
  for (const auto& [node, prob] : p.probabilities) {
    if (prob > 1e-300) h -= prob * std::log2(prob);
  }
  return h;
}

double min_entropy(const Posterior& p) {
  check_normalized(p);
  double best = 0.0;
  for (const auto& [node, prob] : p.probabilities) best = std::max(best, prob);
  if (best <= 0.0) throw InvariantViolationError("posterior has empty support");
  return -std::log2(best);
}

double effective_anonymity_set(double bits) {
  if (bits < 0.0) throw InvalidParameterError("entropy must be non-negative");
  return std::exp2(bits);
}

Summary summarize(std::span<const double> samples) {
  if (samples.empty()) throw EmptyInputError("summarize requires a non-empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  auto quantile = [&](double q) {
    double rank = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };

  Summary s;
  s.count = sorted.size();
  s.min = sorted.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = sorted.back();
  double total = 0.0;
  for (double v : sorted) total += v;
  s.mean = total / static_cast<double>(sorted.size());
  return s;
}

double intercept_fraction(std::uint64_t intercepted, std::uint64_t total) {
  if (total == 0) throw EmptyInputError("intercept fraction of zero transactions");
  if (intercepted > total) throw InvalidParameterError("intercepted exceeds total");
  return static_cast<double>(intercepted) / static_cast<double>(total);
}

}  // namespace p2panon
