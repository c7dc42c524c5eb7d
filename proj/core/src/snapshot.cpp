// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "p2panon/errors.hpp"

namespace p2panon {

namespace {

using nlohmann::json;

struct ParsedPolicy {
  double base_fee = 0.0;
  double proportional_fee_rate = 0.0;
  double timelock = 0.0;
  bool present = false;
};

struct ParsedChannel {
  std::string id;
  NodeId node1 = 0;
  NodeId node2 = 0;
  double capacity = 0.0;
  ParsedPolicy policy1;
  ParsedPolicy policy2;
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

double require_number(const json& obj, const char* field, const std::string& where,
                      bool integral) {
  if (!obj.contains(field)) fail(where, std::string("missing field '") + field + "'");
  const json& v = obj.at(field);
  if (!v.is_number()) fail(where, std::string("field '") + field + "' is not a number");
  double d = v.get<double>();
  if (integral && !v.is_number_integer()) {
    fail(where, std::string("field '") + field + "' must be an integer");
  }
  if (d < 0) fail(where, std::string("field '") + field + "' must be non-negative");
  return d;
}

ParsedPolicy parse_policy(const json& channel, const char* field, const std::string& where) {
  ParsedPolicy p;
  if (!channel.contains(field) || channel.at(field).is_null()) return p;
  const json& obj = channel.at(field);
  if (!obj.is_object()) fail(where, std::string("field '") + field + "' is not an object");
  std::string pwhere = where + "." + field;
  p.base_fee = require_number(obj, "base_fee", pwhere, true);
  p.proportional_fee_rate = require_number(obj, "proportional_fee_rate", pwhere, false);
  p.timelock = require_number(obj, "timelock", pwhere, true);
  p.present = true;
  return p;
}

/// Cost order used when collapsing parallel channels: cheaper flat fee wins,
/// then rate, then timelock, then channel id.
bool cheaper(const ParsedChannel& a, const ParsedPolicy& pa, const ParsedChannel& b,
             const ParsedPolicy& pb) {
  auto ka = std::tie(pa.base_fee, pa.proportional_fee_rate, pa.timelock, a.id);
  auto kb = std::tie(pb.base_fee, pb.proportional_fee_rate, pb.timelock, b.id);
  return ka < kb;
}

}  // namespace

Topology load_ln_snapshot(const std::string& text, SnapshotLoadReport* report) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("snapshot root must be an object");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw ParseError("snapshot: missing 'nodes' array");
  }
  if (!doc.contains("channels") || !doc.at("channels").is_array()) {
    throw ParseError("snapshot: missing 'channels' array");
  }

  std::vector<std::string> aliases;
  std::unordered_map<std::string, NodeId> by_alias;
  {
    std::size_t idx = 0;
    for (const json& node : doc.at("nodes")) {
      std::string where = "nodes[" + std::to_string(idx) + "]";
      if (!node.is_object() || !node.contains("id") || !node.at("id").is_string()) {
        fail(where, "expected an object with a string field 'id'");
      }
      std::string alias = node.at("id").get<std::string>();
      if (by_alias.count(alias)) fail(where, "duplicate node id '" + alias + "'");
      by_alias.emplace(alias, static_cast<NodeId>(aliases.size()));
      aliases.push_back(std::move(alias));
      ++idx;
    }
  }

  std::vector<ParsedChannel> channels;
  std::unordered_set<std::string> channel_ids;
  {
    std::size_t idx = 0;
    for (const json& ch : doc.at("channels")) {
      std::string where = "channels[" + std::to_string(idx) + "]";
      if (!ch.is_object()) fail(where, "expected an object");
      if (!ch.contains("channel_id") || !ch.at("channel_id").is_string()) {
        fail(where, "missing string field 'channel_id'");
      }
      ParsedChannel pc;
      pc.id = ch.at("channel_id").get<std::string>();
      where += " (channel_id=" + pc.id + ")";
      if (!channel_ids.insert(pc.id).second) {
        throw DuplicateRecordError(where + ": duplicate channel_id");
      }
      for (const char* endpoint : {"node1", "node2"}) {
        if (!ch.contains(endpoint) || !ch.at(endpoint).is_string()) {
          fail(where, std::string("missing string field '") + endpoint + "'");
        }
        auto alias = ch.at(endpoint).get<std::string>();
        auto it = by_alias.find(alias);
        if (it == by_alias.end()) {
          fail(where, std::string("unknown alias '") + alias + "' in " + endpoint);
        }
        (endpoint[4] == '1' ? pc.node1 : pc.node2) = it->second;
      }
      if (pc.node1 == pc.node2) fail(where, "channel endpoints are identical");
      pc.capacity = require_number(ch, "capacity", where, true);
      if (pc.capacity <= 0) fail(where, "capacity must be positive");
      pc.policy1 = parse_policy(ch, "node1_policy", where);
      pc.policy2 = parse_policy(ch, "node2_policy", where);
      channels.push_back(std::move(pc));
      ++idx;
    }
  }

  // Group channels by unordered endpoint pair and keep the cheapest arc per
  // direction.
  std::map<std::pair<NodeId, NodeId>, std::vector<const ParsedChannel*>> groups;
  for (const auto& pc : channels) {
    auto key = std::minmax(pc.node1, pc.node2);
    groups[{key.first, key.second}].push_back(&pc);
  }

  struct Arc {
    NodeId to;
    ChannelPolicy policy;
  };
  std::vector<std::vector<Arc>> arcs(aliases.size());
  std::unordered_set<const ParsedChannel*> used;
  for (const auto& [pair, group] : groups) {
    for (int dir = 0; dir < 2; ++dir) {
      NodeId from = dir == 0 ? pair.first : pair.second;
      NodeId to = dir == 0 ? pair.second : pair.first;
      const ParsedChannel* winner = nullptr;
      const ParsedPolicy* winner_policy = nullptr;
      for (const ParsedChannel* pc : group) {
        const ParsedPolicy& pol = pc->node1 == from ? pc->policy1 : pc->policy2;
        if (!pol.present) continue;
        if (!winner || cheaper(*pc, pol, *winner, *winner_policy)) {
          winner = pc;
          winner_policy = &pol;
        }
      }
      if (winner) {
        arcs[from].push_back(
            {to, ChannelPolicy{winner_policy->proportional_fee_rate, winner_policy->base_fee,
                               winner_policy->timelock, winner->capacity}});
        used.insert(winner);
      }
    }
  }
  if (report) {
    report->collapsed_channels.clear();
    for (const auto& pc : channels) {
      if (!used.count(&pc)) {
        // Either a loser among parallel channels or a channel with no policy
        // in any usable direction.
        bool parallel = groups[{std::min(pc.node1, pc.node2), std::max(pc.node1, pc.node2)}]
                            .size() > 1;
        if (parallel) report->collapsed_channels.push_back(pc.id);
      }
    }
    std::sort(report->collapsed_channels.begin(), report->collapsed_channels.end());
  }

  std::vector<std::vector<NodeId>> succ(aliases.size());
  std::vector<std::vector<ChannelPolicy>> pols(aliases.size());
  for (NodeId u = 0; u < aliases.size(); ++u) {
    std::sort(arcs[u].begin(), arcs[u].end(),
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
    for (const Arc& a : arcs[u]) {
      succ[u].push_back(a.to);
      pols[u].push_back(a.policy);
    }
  }
  Topology t(TopologyKind::LnSnapshot, std::move(succ), std::move(pols), std::move(aliases));

  if (doc.contains("roles")) {
    const json& roles = doc.at("roles");
    if (!roles.is_array() || roles.size() != t.node_count()) {
      throw ParseError("roles: expected one entry per node");
    }
    std::vector<NodeId> adversarial;
    for (NodeId v = 0; v < t.node_count(); ++v) {
      std::string r = roles[v].is_string() ? roles[v].get<std::string>() : "";
      if (r == "adversarial") {
        adversarial.push_back(v);
      } else if (r != "honest") {
        fail("roles[" + std::to_string(v) + "]", "expected 'honest' or 'adversarial'");
      }
    }
    t = t.with_roles(adversarial);
  }
  return t;
}

Topology load_ln_snapshot_file(const std::string& path, SnapshotLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open snapshot file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_ln_snapshot(buf.str(), report);
}

std::string export_topology(const Topology& t) {
  const std::uint32_t n = t.node_count();
  json doc;
  doc["kind"] = to_string(t.kind());

  json nodes = json::array();
  for (NodeId v = 0; v < n; ++v) {
    std::string alias = t.aliases().empty() ? "n" + std::to_string(v) : t.aliases()[v];
    nodes.push_back(json{{"id", alias}});
  }
  doc["nodes"] = std::move(nodes);

  auto alias_of = [&](NodeId v) {
    return t.aliases().empty() ? "n" + std::to_string(v) : t.aliases()[v];
  };

  // Pair up directed arcs into channels keyed by unordered endpoints.
  std::map<std::pair<NodeId, NodeId>, std::pair<bool, bool>> pairs;  // lo->hi, hi->lo
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : t.successors(u)) {
      auto key = std::minmax(u, v);
      auto& entry = pairs[{key.first, key.second}];
      (u < v ? entry.first : entry.second) = true;
    }
  }

  auto policy_json = [&](NodeId u, NodeId v) {
    json p;
    if (t.has_policies()) {
      auto succ = t.successors(u);
      auto idx = static_cast<std::size_t>(
          std::find(succ.begin(), succ.end(), v) - succ.begin());
      const ChannelPolicy& pol = t.policies(u)[idx];
      p["base_fee"] = static_cast<std::int64_t>(std::llround(pol.base_fee));
      p["proportional_fee_rate"] = pol.proportional_fee_rate;
      p["timelock"] = static_cast<std::int64_t>(std::llround(pol.timelock));
    } else {
      p["base_fee"] = 0;
      p["proportional_fee_rate"] = 0.0;
      p["timelock"] = 0;
    }
    return p;
  };
  auto capacity_of = [&](NodeId u, NodeId v) -> std::int64_t {
    if (!t.has_policies()) return 1;  // placeholder so exports stay loadable
    auto succ = t.successors(u);
    auto idx =
        static_cast<std::size_t>(std::find(succ.begin(), succ.end(), v) - succ.begin());
    return static_cast<std::int64_t>(std::llround(t.policies(u)[idx].capacity));
  };

  json channels = json::array();
  std::size_t counter = 0;
  for (const auto& [key, dirs] : pairs) {
    NodeId lo = key.first, hi = key.second;
    NodeId n1 = dirs.first ? lo : hi;
    NodeId n2 = dirs.first ? hi : lo;
    json ch;
    char id[16];
    std::snprintf(id, sizeof id, "c%06zu", counter++);
    ch["channel_id"] = id;
    ch["node1"] = alias_of(n1);
    ch["node2"] = alias_of(n2);
    ch["capacity"] = capacity_of(n1, n2);
    ch["node1_policy"] = policy_json(n1, n2);
    if (dirs.first && dirs.second) ch["node2_policy"] = policy_json(n2, n1);
    channels.push_back(std::move(ch));
  }
  doc["channels"] = std::move(channels);

  json roles = json::array();
  for (NodeId v = 0; v < n; ++v) {
    roles.push_back(t.is_adversarial(v) ? "adversarial" : "honest");
  }
  doc["roles"] = std::move(roles);

  return doc.dump(2) + "\n";
}

}  // namespace p2panon
