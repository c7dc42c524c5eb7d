// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P2PANON_VERSION_HPP
#define P2PANON_VERSION_HPP

namespace p2panon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace p2panon

#endif  // P2PANON_VERSION_HPP
