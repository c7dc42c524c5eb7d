// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Payment-network snapshot ingestion and normalized export.
//
// Document schema (JSON):
//   {
//     "nodes": [ {"id": "<alias>"}, ... ],
//     "channels": [ {
//       "channel_id": "<string>",
//       "node1": "<alias>", "node2": "<alias>",
//       "capacity": <integer >= 1>,
//       "node1_policy": { "base_fee": <int>, "proportional_fee_rate": <decimal>,
//                         "timelock": <int> },   // direction leaving node1
//       "node2_policy": { ... }                  // direction leaving node2
//     }, ... ],
//     "roles": [ "honest" | "adversarial", ... ]  // optional, one per node
//   }
// A missing policy omits that direction. Parallel channels between the same
// pair collapse to the cheapest per direction at load time.

#ifndef P2PANON_SNAPSHOT_HPP
#define P2PANON_SNAPSHOT_HPP

#include <string>
#include <vector>

#include "p2panon/graph.hpp"

namespace p2panon {

struct SnapshotLoadReport {
  /// channel_ids dropped because a parallel channel was cheaper in both
  /// directions it could have served.
  std::vector<std::string> collapsed_channels;
};

Topology load_ln_snapshot(const std::string& text, SnapshotLoadReport* report = nullptr);
Topology load_ln_snapshot_file(const std::string& path, SnapshotLoadReport* report = nullptr);

/// Normalized document for a topology: channels are synthesized from the
/// directed edge set with canonical ids, sorted by endpoint pair, plus a
/// `roles` list and an informational `kind`. Emitting a loaded snapshot is
/// idempotent: load followed by export yields the same bytes again.
std::string export_topology(const Topology& t);

}  // namespace p2panon

#endif  // P2PANON_SNAPSHOT_HPP
