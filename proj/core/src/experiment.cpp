// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include "p2panon/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "p2panon/errors.hpp"
#include "p2panon/generators.hpp"
#include "p2panon/ln.hpp"
#include "p2panon/snapshot.hpp"
#include "p2panon/version.hpp"
#include "parallel.hpp"

namespace p2panon {

using nlohmann::json;

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Dandelion: return "dandelion";
    case Scheme::DandelionPP: return "dandelion_pp";
    case Scheme::Ln: return "ln";
    case Scheme::SubgraphLearning: return "subgraph_learning";
  }
  return "unknown";
}

const char* to_string(ReportFormat f) {
  return f == ReportFormat::Csv ? "csv" : "structured";
}

std::uint32_t AdversarySpec::resolve(std::uint32_t n) const {
  if (use_fraction) {
    auto c = static_cast<std::uint32_t>(std::max<std::int64_t>(1, std::llround(fraction * n)));
    return std::min(c, n - 1);
  }
  return count;
}

namespace {

/// Collects violations while walking the config document so that every
/// problem is reported at once.
struct Validator {
  std::vector<std::string> violations;

  void fail(const std::string& path, const std::string& what) {
    violations.push_back(path + ": " + what);
  }

  void check_known_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (const char* k : known) {
        if (key == k) {
          ok = true;
          break;
        }
      }
      if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }

  template <typename T>
  std::optional<T> get(const json& obj, const std::string& path, const char* key,
                       bool required = false) {
    if (!obj.contains(key)) {
      if (required) fail(path.empty() ? key : path + "." + key, "missing required key");
      return std::nullopt;
    }
    try {
      return obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail(path.empty() ? key : path + "." + key, "wrong type");
      return std::nullopt;
    }
  }
};

AdversaryStrategy parse_strategy(const std::string& s, Validator& v) {
  if (s == "random") return AdversaryStrategy::Random;
  if (s == "top_degree") return AdversaryStrategy::TopDegree;
  if (s == "top_betweenness") return AdversaryStrategy::TopBetweenness;
  v.fail("adversary.strategy", "expected random | top_degree | top_betweenness");
  return AdversaryStrategy::Random;
}

Scheme parse_scheme(const std::string& s, Validator& v) {
  if (s == "dandelion") return Scheme::Dandelion;
  if (s == "dandelion_pp") return Scheme::DandelionPP;
  if (s == "ln") return Scheme::Ln;
  if (s == "subgraph_learning") return Scheme::SubgraphLearning;
  v.fail("scheme", "expected dandelion | dandelion_pp | ln | subgraph_learning");
  return Scheme::Dandelion;
}

void forbid(const json& doc, Validator& v, const char* key, const char* scheme) {
  if (doc.contains(key)) {
    v.fail(key, std::string("not applicable to scheme ") + scheme);
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  Validator v;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ConfigError({"config root must be an object"});

  v.check_known_keys(doc, "",
                     {"scheme", "seed", "runs", "tx_per_node", "topology", "p_f", "adversary",
                      "amount", "k", "risk_factor", "bounds", "prior", "learning", "output"});

  auto scheme_str = v.get<std::string>(doc, "", "scheme", true);
  if (scheme_str) cfg.scheme = parse_scheme(*scheme_str, v);
  const char* scheme_name = scheme_str ? scheme_str->c_str() : "?";

  if (auto seed = v.get<std::uint64_t>(doc, "", "seed")) cfg.seed = *seed;
  if (auto runs = v.get<std::uint32_t>(doc, "", "runs")) {
    cfg.runs = *runs;
    if (cfg.runs == 0) v.fail("runs", "must be at least 1");
  }
  if (auto tx = v.get<std::uint32_t>(doc, "", "tx_per_node")) {
    cfg.tx_per_node = *tx;
    if (cfg.tx_per_node == 0) v.fail("tx_per_node", "must be at least 1");
  }

  // Topology block.
  if (!doc.contains("topology")) {
    v.fail("topology", "missing required key");
  } else if (!doc.at("topology").is_object()) {
    v.fail("topology", "wrong type");
  } else {
    const json& topo = doc.at("topology");
    v.check_known_keys(topo, "topology",
                       {"generator", "snapshot", "n", "out_k", "avg_degree", "mean_fee"});
    auto gen = v.get<std::string>(topo, "topology", "generator");
    auto snap = v.get<std::string>(topo, "topology", "snapshot");
    if (gen && snap) v.fail("topology", "generator and snapshot are mutually exclusive");
    if (!gen && !snap) v.fail("topology", "one of generator or snapshot is required");
    if (snap) {
      cfg.topology.snapshot_path = *snap;
      if (!std::filesystem::exists(*snap)) {
        v.fail("topology.snapshot", "file does not exist: " + *snap);
      }
    }
    if (gen) {
      cfg.topology.generator = *gen;
      static const char* kGenerators[] = {"line", "quasi_4_regular", "k_regular",
                                          "weighted_random"};
      if (std::find(std::begin(kGenerators), std::end(kGenerators), *gen) ==
          std::end(kGenerators)) {
        v.fail("topology.generator",
               "expected line | quasi_4_regular | k_regular | weighted_random");
      }
      auto n = v.get<std::uint32_t>(topo, "topology", "n", true);
      if (n) {
        cfg.topology.n = *n;
        if (*n < 3) v.fail("topology.n", "must be at least 3");
      }
      if (auto out_k = v.get<std::uint32_t>(topo, "topology", "out_k")) {
        cfg.topology.out_k = *out_k;
        if (*gen != "k_regular") v.fail("topology.out_k", "only applies to k_regular");
      } else if (*gen == "k_regular") {
        cfg.topology.out_k = 8;  // bitcoin-like default: 16-regular, 8 outgoing
      }
      if (auto deg = v.get<std::uint32_t>(topo, "topology", "avg_degree")) {
        cfg.topology.avg_degree = *deg;
        if (*gen != "weighted_random") {
          v.fail("topology.avg_degree", "only applies to weighted_random");
        }
      } else if (*gen == "weighted_random") {
        v.fail("topology.avg_degree", "required for weighted_random");
      }
      if (auto fee = v.get<double>(topo, "topology", "mean_fee")) {
        cfg.topology.mean_fee = *fee;
        if (*gen != "weighted_random") v.fail("topology.mean_fee", "only applies to weighted_random");
        if (*fee <= 0) v.fail("topology.mean_fee", "must be positive");
      }
    }
  }

  // Adversary block.
  if (!doc.contains("adversary")) {
    v.fail("adversary", "missing required key");
  } else if (!doc.at("adversary").is_object()) {
    v.fail("adversary", "wrong type");
  } else {
    const json& adv = doc.at("adversary");
    v.check_known_keys(adv, "adversary", {"strategy", "fraction", "count"});
    auto strat = v.get<std::string>(adv, "adversary", "strategy", true);
    if (strat) cfg.adversary.strategy = parse_strategy(*strat, v);
    auto fraction = v.get<double>(adv, "adversary", "fraction");
    auto count = v.get<std::uint32_t>(adv, "adversary", "count");
    if (fraction && count) v.fail("adversary", "fraction and count are mutually exclusive");
    if (!fraction && !count) v.fail("adversary", "one of fraction or count is required");
    if (fraction) {
      cfg.adversary.use_fraction = true;
      cfg.adversary.fraction = *fraction;
      if (*fraction <= 0.0 || *fraction >= 1.0) {
        v.fail("adversary.fraction", "must lie in (0, 1)");
      }
    }
    if (count) {
      cfg.adversary.use_fraction = false;
      cfg.adversary.count = *count;
      if (*count == 0) v.fail("adversary.count", "must be positive");
    }
  }

  // Scheme-specific keys.
  const bool hop_by_hop = cfg.scheme == Scheme::Dandelion || cfg.scheme == Scheme::DandelionPP;
  const bool needs_pf = hop_by_hop || cfg.scheme == Scheme::SubgraphLearning;
  if (needs_pf) {
    auto pf = v.get<double>(doc, "", "p_f", true);
    if (pf) {
      cfg.p_f = *pf;
      if (*pf <= 0.0 || *pf >= 1.0) v.fail("p_f", "must lie in (0, 1)");
    }
  } else {
    forbid(doc, v, "p_f", scheme_name);
  }

  if (cfg.scheme == Scheme::Ln) {
    if (auto amount = v.get<double>(doc, "", "amount")) {
      cfg.amount = *amount;
      if (*amount < 0) v.fail("amount", "must be non-negative");
    }
    if (auto k = v.get<std::uint32_t>(doc, "", "k")) {
      cfg.k = *k;
      if (*k == 0) v.fail("k", "must be at least 1");
    }
    if (auto rf = v.get<double>(doc, "", "risk_factor")) {
      cfg.risk_factor = *rf;
      if (*rf < 0) v.fail("risk_factor", "must be non-negative");
    }
    forbid(doc, v, "tx_per_node", scheme_name);
  } else {
    forbid(doc, v, "amount", scheme_name);
    forbid(doc, v, "k", scheme_name);
    forbid(doc, v, "risk_factor", scheme_name);
  }

  if (cfg.scheme == Scheme::DandelionPP) {
    if (doc.contains("bounds")) {
      const json& b = doc.at("bounds");
      if (!b.is_object()) {
        v.fail("bounds", "wrong type");
      } else {
        v.check_known_keys(b, "bounds", {"max_hops", "min_contribution"});
        PathEnumerationBounds bounds;
        if (auto mh = v.get<std::uint32_t>(b, "bounds", "max_hops", true)) {
          bounds.max_hops = *mh;
          if (*mh == 0) v.fail("bounds.max_hops", "must be at least 1");
        }
        if (auto mc = v.get<double>(b, "bounds", "min_contribution")) {
          bounds.min_contribution = *mc;
          if (*mc < 0 || *mc >= 1) v.fail("bounds.min_contribution", "must lie in [0, 1)");
        }
        cfg.bounds = bounds;
      }
    }
  } else {
    forbid(doc, v, "bounds", scheme_name);
  }

  if (cfg.scheme == Scheme::SubgraphLearning) {
    if (!cfg.topology.generator.empty() && cfg.topology.generator != "k_regular") {
      v.fail("topology.generator", "subgraph_learning requires a k_regular base graph");
    }
    if (doc.contains("learning")) {
      const json& l = doc.at("learning");
      if (!l.is_object()) {
        v.fail("learning", "wrong type");
      } else {
        v.check_known_keys(l, "learning", {"elimination", "second_hop"});
        if (auto e = v.get<bool>(l, "learning", "elimination")) cfg.learn_options.elimination = *e;
        if (auto s = v.get<bool>(l, "learning", "second_hop")) cfg.learn_options.second_hop = *s;
      }
    }
  } else {
    forbid(doc, v, "learning", scheme_name);
  }

  if (cfg.scheme != Scheme::Ln && !cfg.topology.snapshot_path.empty()) {
    v.fail("topology.snapshot", std::string("not applicable to scheme ") + scheme_name);
  }
  if (cfg.scheme == Scheme::Dandelion && !cfg.topology.generator.empty() &&
      cfg.topology.generator != "line") {
    v.fail("topology.generator", "dandelion runs on a line overlay");
  }
  if (cfg.scheme == Scheme::DandelionPP && !cfg.topology.generator.empty() &&
      cfg.topology.generator != "quasi_4_regular" && cfg.topology.generator != "k_regular") {
    v.fail("topology.generator", "dandelion_pp runs on a quasi_4_regular or k_regular overlay");
  }
  if (cfg.scheme == Scheme::Ln && !cfg.topology.generator.empty() &&
      cfg.topology.generator != "weighted_random") {
    v.fail("topology.generator", "ln runs on a weighted_random graph or a snapshot");
  }

  if (doc.contains("prior")) {
    const json& p = doc.at("prior");
    if (p.is_string()) {
      if (p.get<std::string>() != "uniform") v.fail("prior", "expected \"uniform\" or a table");
    } else if (p.is_object() && p.contains("table") && p.at("table").is_object()) {
      for (const auto& [key, value] : p.at("table").items()) {
        try {
          NodeId node = static_cast<NodeId>(std::stoul(key));
          double w = value.get<double>();
          if (w < 0) v.fail("prior.table." + key, "weights must be non-negative");
          cfg.prior_table[node] = w;
        } catch (const std::exception&) {
          v.fail("prior.table." + key, "expected integer node id keys and numeric weights");
        }
      }
    } else {
      v.fail("prior", "expected \"uniform\" or {\"table\": {...}}");
    }
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (!out.is_object()) {
      v.fail("output", "wrong type");
    } else {
      v.check_known_keys(out, "output", {"path", "format"});
      if (auto path = v.get<std::string>(out, "output", "path")) cfg.output_path = *path;
      if (auto format = v.get<std::string>(out, "output", "format")) {
        if (*format == "csv") {
          cfg.format = ReportFormat::Csv;
        } else if (*format == "structured") {
          cfg.format = ReportFormat::Structured;
        } else {
          v.fail("output.format", "expected csv | structured");
        }
      }
    }
  }

  if (!v.violations.empty()) throw ConfigError(std::move(v.violations));
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return parse_config(doc);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json ExperimentConfig::echo() const {
  json doc;
  doc["scheme"] = to_string(scheme);
  doc["seed"] = seed;
  doc["runs"] = runs;
  json topo;
  if (!topology.snapshot_path.empty()) {
    topo["snapshot"] = topology.snapshot_path;
  } else {
    topo["generator"] = topology.generator;
    topo["n"] = topology.n;
    if (topology.generator == "k_regular") topo["out_k"] = topology.out_k;
    if (topology.generator == "weighted_random") {
      topo["avg_degree"] = topology.avg_degree;
      topo["mean_fee"] = topology.mean_fee;
    }
  }
  doc["topology"] = std::move(topo);
  json adv;
  adv["strategy"] = to_string(adversary.strategy);
  if (adversary.use_fraction) {
    adv["fraction"] = adversary.fraction;
  } else {
    adv["count"] = adversary.count;
  }
  doc["adversary"] = std::move(adv);

  switch (scheme) {
    case Scheme::Dandelion:
      doc["p_f"] = p_f;
      doc["tx_per_node"] = tx_per_node;
      break;
    case Scheme::DandelionPP: {
      doc["p_f"] = p_f;
      doc["tx_per_node"] = tx_per_node;
      if (bounds) {
        doc["bounds"] = {{"max_hops", bounds->max_hops},
                         {"min_contribution", bounds->min_contribution}};
      }
      break;
    }
    case Scheme::Ln:
      doc["amount"] = amount;
      doc["k"] = k;
      doc["risk_factor"] = risk_factor;
      break;
    case Scheme::SubgraphLearning:
      doc["p_f"] = p_f;
      doc["tx_per_node"] = tx_per_node;
      doc["learning"] = {{"elimination", learn_options.elimination},
                         {"second_hop", learn_options.second_hop}};
      break;
  }
  if (!prior_table.empty()) {
    json table;
    for (const auto& [node, w] : prior_table) table[std::to_string(node)] = w;
    doc["prior"] = {{"table", std::move(table)}};
  } else {
    doc["prior"] = "uniform";
  }
  return doc;
}

namespace {

std::vector<double> materialize_prior(const std::map<NodeId, double>& table, std::uint32_t n) {
  if (table.empty()) return {};
  std::vector<double> weights(n, 0.0);
  for (const auto& [node, w] : table) {
    if (node >= n) throw InvalidParameterError("prior table references node out of range");
    weights[node] = w;
  }
  return weights;
}

struct RunResult {
  std::vector<TxRecord> records;
  std::uint64_t total = 0;
  std::uint64_t intercepted = 0;
};

void finalize_report(ExperimentReport& report, std::vector<RunResult> per_run,
                     const ExperimentConfig& cfg) {
  for (auto& rr : per_run) {
    report.total_transactions += rr.total;
    report.intercepted_transactions += rr.intercepted;
    report.records.insert(report.records.end(), std::make_move_iterator(rr.records.begin()),
                          std::make_move_iterator(rr.records.end()));
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const TxRecord& a, const TxRecord& b) {
                     if (a.run != b.run) return a.run < b.run;
                     return a.observation < b.observation;
                   });
  if (report.total_transactions > 0) {
    report.intercept_fraction =
        intercept_fraction(report.intercepted_transactions, report.total_transactions);
  }
  if (!report.records.empty()) {
    std::vector<double> entropies, min_entropies;
    entropies.reserve(report.records.size());
    min_entropies.reserve(report.records.size());
    for (const auto& r : report.records) {
      entropies.push_back(r.entropy_bits);
      min_entropies.push_back(r.min_entropy_bits);
    }
    report.entropy_summary = summarize(entropies);
    report.min_entropy_summary = summarize(min_entropies);
  }
  report.config_echo = cfg.echo();
  report.version = kVersion;
}

Topology make_hop_topology(const ExperimentConfig& cfg, std::uint64_t topo_seed) {
  const auto& spec = cfg.topology;
  if (spec.generator == "line") return generate_line_graph(spec.n, topo_seed);
  if (spec.generator == "quasi_4_regular") return generate_quasi_4_regular(spec.n, topo_seed);
  if (spec.generator == "k_regular") {
    return generate_k_regular(spec.n, spec.out_k, topo_seed);
  }
  throw InvalidParameterError("unsupported stem overlay generator: " + spec.generator);
}

}  // namespace

ExperimentReport run_hop_by_hop_experiment(const ExperimentConfig& cfg, unsigned workers) {
  if (cfg.scheme != Scheme::Dandelion && cfg.scheme != Scheme::DandelionPP) {
    throw InvalidParameterError("not a hop-by-hop configuration");
  }
  auto started = std::chrono::steady_clock::now();
  const std::uint32_t n = cfg.topology.n;
  std::vector<RunResult> per_run(cfg.runs);

  auto run_one = [&](std::uint32_t r) {
    std::uint64_t topo_seed = RngStream::derive(cfg.seed, "topology", r).next_u64();
    Topology t = make_hop_topology(cfg, topo_seed);
    std::uint64_t adv_seed = RngStream::derive(cfg.seed, "adversary", r).next_u64();
    t = assign_adversaries(t, cfg.adversary.strategy, cfg.adversary.resolve(n), adv_seed);

    PathEnumerationBounds bounds = cfg.bounds ? *cfg.bounds : default_bounds_for(t);
    std::vector<double> prior = materialize_prior(cfg.prior_table, n);

    RunResult& rr = per_run[r];
    struct Cached {
      double entropy;
      double min_entropy;
      std::uint32_t support;
      std::string key;
    };
    std::unordered_map<std::uint64_t, Cached> cache;

    for (NodeId origin = 0; origin < n; ++origin) {
      if (t.is_adversarial(origin)) continue;
      for (std::uint32_t txi = 0; txi < cfg.tx_per_node; ++txi) {
        std::uint64_t stream_index =
            (static_cast<std::uint64_t>(r) * n + origin) * cfg.tx_per_node + txi;
        auto rng = RngStream::derive(cfg.seed, "stem-walk", stream_index);
        StemOutcome outcome = simulate_stem_phase(t, origin, cfg.p_f, rng);
        ++rr.total;
        if (outcome.kind != StemOutcome::Kind::Intercepted) continue;
        ++rr.intercepted;

        const StemObservation& obs = outcome.observation;
        std::uint64_t cache_key =
            (static_cast<std::uint64_t>(obs.adversary) << 32) | obs.predecessor;
        auto it = cache.find(cache_key);
        if (it == cache.end()) {
          Posterior post = cfg.scheme == Scheme::Dandelion
                               ? dandelion_posterior(t, cfg.p_f, obs, prior)
                               : dpp_posterior(t, cfg.p_f, obs, bounds, prior);
          Cached c{shannon_entropy(post), min_entropy(post), post.support_size(),
                   post.observation_key};
          it = cache.emplace(cache_key, std::move(c)).first;
        }
        rr.records.push_back(
            {r, it->second.key, it->second.entropy, it->second.min_entropy, it->second.support});
      }
    }
  };
  detail::parallel_for(cfg.runs, workers, [&](std::size_t run_idx) {
    try {
      run_one(static_cast<std::uint32_t>(run_idx));
    } catch (const Error& e) {
      throw Error("run " + std::to_string(run_idx) + ": " + e.what());
    }
  });

  ExperimentReport report;
  finalize_report(report, std::move(per_run), cfg);
  report.extra["scheme"] = to_string(cfg.scheme);
  if (cfg.scheme == Scheme::DandelionPP) {
    PathEnumerationBounds b = cfg.bounds ? *cfg.bounds : PathEnumerationBounds{};
    if (!cfg.bounds) {
      // Reconstruct the per-overlay default for the echo.
      Topology probe = make_hop_topology(cfg, RngStream::derive(cfg.seed, "topology", 0).next_u64());
      b = default_bounds_for(probe);
    }
    report.extra["bounds"] = {{"max_hops", b.max_hops}, {"min_contribution", b.min_contribution}};
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ExperimentReport run_ln_experiment(const ExperimentConfig& cfg, unsigned workers) {
  if (cfg.scheme != Scheme::Ln) throw InvalidParameterError("not a source-routed configuration");
  auto started = std::chrono::steady_clock::now();

  Topology base = cfg.topology.snapshot_path.empty()
                      ? generate_weighted_random_graph(
                            cfg.topology.n, cfg.topology.avg_degree, cfg.topology.mean_fee,
                            RngStream::derive(cfg.seed, "topology", 0).next_u64())
                      : load_ln_snapshot_file(cfg.topology.snapshot_path);
  if (cfg.amount > 0) base = filter_by_amount(base, cfg.amount);
  const std::uint32_t n = base.node_count();
  std::vector<double> prior = materialize_prior(cfg.prior_table, n);

  std::vector<RunResult> per_run(cfg.runs);
  std::uint64_t total_routes = 0;
  auto run_one = [&](std::uint32_t r) {
    std::uint64_t adv_seed = RngStream::derive(cfg.seed, "adversary", r).next_u64();
    Topology t = assign_adversaries(base, cfg.adversary.strategy, cfg.adversary.resolve(n),
                                    adv_seed, cfg.amount, cfg.risk_factor);
    PathSet ps = build_path_set(t, cfg.amount, cfg.k, cfg.risk_factor, workers);
    total_routes = ps.total_routes();
    LnAnalyzer analyzer(ps, t);

    RunResult& rr = per_run[r];
    struct Cached {
      double entropy;
      double min_entropy;
      std::uint32_t support;
      std::string key;
    };
    std::map<LnObservation, Cached> cache;
    for (NodeId src = 0; src < n; ++src) {
      if (t.is_adversarial(src)) continue;
      for (const auto& [dst, routes] : ps.routes_from(src)) {
        auto rng = RngStream::derive(cfg.seed, "ln-route-draw",
                                     (static_cast<std::uint64_t>(r) * n + src) * n + dst);
        const Route& route = routes[rng.next_index(routes.size())];
        ++rr.total;
        auto obs = observation_from_route(route, t);
        if (!obs) continue;
        ++rr.intercepted;
        auto it = cache.find(*obs);
        if (it == cache.end()) {
          Posterior post = analyzer.posterior(*obs, prior);
          Cached c{shannon_entropy(post), min_entropy(post), post.support_size(),
                   post.observation_key};
          it = cache.emplace(*obs, std::move(c)).first;
        }
        rr.records.push_back(
            {r, it->second.key, it->second.entropy, it->second.min_entropy, it->second.support});
      }
    }
  };
  for (std::uint32_t r = 0; r < cfg.runs; ++r) {
    try {
      run_one(r);
    } catch (const Error& e) {
      throw Error("run " + std::to_string(r) + ": " + e.what());
    }
  }

  ExperimentReport report;
  finalize_report(report, std::move(per_run), cfg);
  report.extra["scheme"] = "ln";
  report.extra["nodes"] = n;
  report.extra["directed_edges"] = base.edge_count();
  report.extra["path_set_routes"] = total_routes;
  if (n > 0) {
    report.extra["lcc_nodes"] = largest_connected_component(base).node_count();
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

LearnedSubgraph run_subgraph_learning(const ExperimentConfig& cfg, unsigned workers) {
  if (cfg.scheme != Scheme::SubgraphLearning) {
    throw InvalidParameterError("not a subgraph-learning configuration");
  }
  std::uint64_t bg_seed = RngStream::derive(cfg.seed, "topology", 0).next_u64();
  Topology bg = generate_k_regular(cfg.topology.n, cfg.topology.out_k, bg_seed);
  std::uint64_t psg_seed = RngStream::derive(cfg.seed, "psg", 0).next_u64();
  Topology psg = derive_stem_subgraph(bg, 2, psg_seed);

  double fraction = cfg.adversary.use_fraction
                        ? cfg.adversary.fraction
                        : static_cast<double>(cfg.adversary.count) / cfg.topology.n;
  return learn_privacy_subgraph(bg, psg, fraction, cfg.tx_per_node, cfg.p_f, cfg.seed,
                                cfg.learn_options, workers);
}

json learned_subgraph_document(const LearnedSubgraph& learned, const ExperimentConfig& cfg) {
  json doc;
  doc["version"] = kVersion;
  doc["config"] = cfg.echo();
  doc["accuracy"] = learned.accuracy;
  auto edges_json = [](const std::vector<std::pair<NodeId, NodeId>>& edges) {
    json arr = json::array();
    for (const auto& [u, w] : edges) arr.push_back(json::array({u, w}));
    return arr;
  };
  doc["known_edges"] = edges_json(learned.known_edges);
  doc["inferred_edges"] = edges_json(learned.inferred_edges);
  json targets = json::array();
  for (const auto& t : learned.targets) {
    targets.push_back(json{{"target", t.target},
                           {"first", t.first},
                           {"second", t.second},
                           {"confidence_gap", t.confidence_gap},
                           {"tie_flagged", t.tie_flagged}});
  }
  doc["targets"] = std::move(targets);
  return doc;
}

ExperimentReport run(const ExperimentConfig& cfg, unsigned workers) {
  switch (cfg.scheme) {
    case Scheme::Dandelion:
    case Scheme::DandelionPP:
      return run_hop_by_hop_experiment(cfg, workers);
    case Scheme::Ln:
      return run_ln_experiment(cfg, workers);
    case Scheme::SubgraphLearning:
      throw InvalidParameterError(
          "subgraph_learning configs produce a learned-subgraph document; use "
          "run_subgraph_learning");
  }
  throw InvalidParameterError("unknown scheme");
}

}  // namespace p2panon
