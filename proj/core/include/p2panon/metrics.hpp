// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Anonymity metrics over originator posteriors, and sample summaries
// for experiment reports.

#ifndef P2PANON_METRICS_HPP
#define P2PANON_METRICS_HPP

#include <cstdint>
#include <span>

#include "p2panon/posterior.hpp"

namespace p2panon {

/// Shannon entropy of the posterior, in bits, with 0*log2(0) := 0.
/// The distribution must sum to 1 within 1e-6.
double shannon_entropy(const Posterior& p);

/// -log2 of the likeliest suspect's probability, in bits.
double min_entropy(const Posterior& p);

/// 2^bits: the number of equally-likely originators the entropy corresponds to.
double effective_anonymity_set(double bits);

/// Five-number summary plus mean. Quartiles use linear interpolation
/// between closest ranks: the p-quantile sits at rank (count - 1) * p of
/// the sorted sample.
struct Summary {
  std::uint64_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

Summary summarize(std::span<const double> samples);

double intercept_fraction(std::uint64_t intercepted, std::uint64_t total);

}  // namespace p2panon

#endif  // P2PANON_METRICS_HPP
