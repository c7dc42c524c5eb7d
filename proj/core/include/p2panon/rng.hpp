// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic randomness for all simulations.
//
// The generator family is SplitMix64 (Steele, Lea, Flood; the engine behind
// java.util.SplittableRandom). Sub-streams are derived by hashing
// (seed, purpose label, index) through the SplitMix64 finalizer, so a
// computation split across workers draws exactly the same numbers as a
// serial one. All sampling helpers are implemented here rather than with
// <random> distributions, whose output is not pinned down by the standard.

#ifndef P2PANON_RNG_HPP
#define P2PANON_RNG_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace p2panon {

namespace detail {

/// SplitMix64 finalizer; bijective on 64-bit values.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a label, used to fold purpose strings into stream seeds.
inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(detail::mix64(seed + kGolden)) {}

  /// Sub-stream derived from (seed, label, index). Streams with distinct
  /// (label, index) pairs are statistically independent.
  static RngStream derive(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = detail::mix64(seed ^ detail::fnv1a(label));
    h = detail::mix64(h + index * kGolden);
    RngStream s(0);
    s.state_ = h;
    return s;
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Unbiased (Lemire rejection).
  std::uint64_t next_index(std::uint64_t bound) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint32_t j = static_cast<std::uint32_t>(next_index(n - i));
      out.push_back(pool[j]);
      pool[j] = pool[n - i - 1];
    }
    return out;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace p2panon

#endif  // P2PANON_RNG_HPP
