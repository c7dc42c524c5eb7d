// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point. Subcommands:
//   run            execute a configured experiment and write its report
//   gen-topology   generate (or load) a topology and write the export document
//   learn-subgraph run the stem-overlay learning attack
//   summarize      recompute aggregates from a records CSV
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "p2panon/errors.hpp"
#include "p2panon/experiment.hpp"
#include "p2panon/generators.hpp"
#include "p2panon/graph_ops.hpp"
#include "p2panon/snapshot.hpp"
#include "p2panon/version.hpp"

namespace {

using nlohmann::json;
using namespace p2panon;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out_path;
  std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_format) {
  cmd->add_option("--config", flags.config_path, "Path to the experiment config document")
      ->required();
  cmd->add_option("--seed", flags.seed, "Override the config seed");
  cmd->add_option("--workers", flags.workers, "Worker threads (results are independent of this)");
  cmd->add_option("--out", flags.out_path, "Output path (overrides the config)");
  if (with_format) {
    cmd->add_option("--format", flags.format, "Output format: csv or structured")
        ->check(CLI::IsMember({"csv", "structured"}));
  }
}

ExperimentConfig load_config(const CommonFlags& flags) {
  ExperimentConfig cfg = parse_config_file(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out_path.empty()) cfg.output_path = flags.out_path;
  if (flags.format == "csv") cfg.format = ReportFormat::Csv;
  if (flags.format == "structured") cfg.format = ReportFormat::Structured;
  return cfg;
}

void write_text(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write output file: " + path);
  out << bytes;
}

int cmd_run(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags);
  if (cfg.output_path.empty()) {
    throw ConfigError({"output.path: required (or pass --out)"});
  }
  if (cfg.scheme == Scheme::SubgraphLearning) {
    LearnedSubgraph learned = run_subgraph_learning(cfg, flags.workers);
    write_text(cfg.output_path, learned_subgraph_document(learned, cfg).dump(2) + "\n");
    std::cerr << "learned " << learned.targets.size() << " targets, accuracy "
              << learned.accuracy << "\n";
    return kExitOk;
  }
  ExperimentReport report = run(cfg, flags.workers);
  write_report(report, cfg.output_path, cfg.format);
  std::cerr << "wrote " << cfg.output_path << ": " << report.records.size() << " records, "
            << "intercept fraction " << report.intercept_fraction << ", wall clock "
            << report.wall_clock_seconds << "s\n";
  return kExitOk;
}

int cmd_learn(const CommonFlags& flags) {
  ExperimentConfig cfg = load_config(flags);
  if (cfg.scheme != Scheme::SubgraphLearning) {
    throw ConfigError({"scheme: learn-subgraph requires scheme subgraph_learning"});
  }
  if (cfg.output_path.empty()) {
    throw ConfigError({"output.path: required (or pass --out)"});
  }
  LearnedSubgraph learned = run_subgraph_learning(cfg, flags.workers);
  write_text(cfg.output_path, learned_subgraph_document(learned, cfg).dump(2) + "\n");
  std::cerr << "accuracy " << learned.accuracy << "\n";
  return kExitOk;
}

/// gen-topology accepts either a full experiment config or a reduced
/// document: {"topology": {...}, "seed": ..., "adversary": {...}?}.
int cmd_gen_topology(const std::string& config_path, std::optional<std::uint64_t> seed_override,
                     const std::string& out_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file: " + config_path});
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  if (!doc.is_object() || !doc.contains("topology") || !doc.at("topology").is_object()) {
    throw ConfigError({"topology: missing required key"});
  }

  std::uint64_t seed = seed_override.value_or(doc.value("seed", std::uint64_t{0}));
  const json& topo = doc.at("topology");
  std::uint64_t topo_seed = RngStream::derive(seed, "topology", 0).next_u64();

  Topology t = [&]() -> Topology {
    if (topo.contains("snapshot")) {
      return load_ln_snapshot_file(topo.at("snapshot").get<std::string>());
    }
    std::string gen = topo.value("generator", "");
    auto n = topo.value("n", std::uint32_t{0});
    if (gen == "line") return generate_line_graph(n, topo_seed);
    if (gen == "quasi_4_regular") return generate_quasi_4_regular(n, topo_seed);
    if (gen == "k_regular") {
      return generate_k_regular(n, topo.value("out_k", std::uint32_t{8}), topo_seed);
    }
    if (gen == "weighted_random") {
      return generate_weighted_random_graph(n, topo.value("avg_degree", std::uint32_t{0}),
                                            topo.value("mean_fee", 1000.0), topo_seed);
    }
    throw ConfigError({"topology.generator: expected line | quasi_4_regular | k_regular | "
                       "weighted_random (or a snapshot)"});
  }();

  if (doc.contains("adversary")) {
    const json& adv = doc.at("adversary");
    std::string strat_str = adv.value("strategy", "random");
    AdversaryStrategy strategy;
    if (strat_str == "random") {
      strategy = AdversaryStrategy::Random;
    } else if (strat_str == "top_degree") {
      strategy = AdversaryStrategy::TopDegree;
    } else if (strat_str == "top_betweenness") {
      strategy = AdversaryStrategy::TopBetweenness;
    } else {
      throw ConfigError({"adversary.strategy: expected random | top_degree | top_betweenness"});
    }
    std::uint32_t count = adv.contains("count")
                              ? adv.at("count").get<std::uint32_t>()
                              : static_cast<std::uint32_t>(std::max<std::int64_t>(
                                    1, std::llround(adv.value("fraction", 0.0) *
                                                    t.node_count())));
    std::uint64_t adv_seed = RngStream::derive(seed, "adversary", 0).next_u64();
    t = assign_adversaries(t, strategy, count, adv_seed);
  }

  write_text(out_path, export_topology(t));
  std::cerr << "topology: " << t.node_count() << " nodes, " << t.edge_count()
            << " directed edges, " << t.adversary_count() << " adversarial\n";
  return kExitOk;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw Error("cannot open records CSV: " + in_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto records = parse_records_csv(buf.str());

  json doc;
  doc["records"] = records.size();
  if (records.empty()) {
    doc["entropy_summary"] = nullptr;
    doc["min_entropy_summary"] = nullptr;
  } else {
    std::vector<double> entropy, min_e;
    entropy.reserve(records.size());
    min_e.reserve(records.size());
    for (const auto& r : records) {
      entropy.push_back(r.entropy_bits);
      min_e.push_back(r.min_entropy_bits);
    }
    auto to_json = [](const Summary& s) {
      return json{{"count", s.count}, {"min", s.min},   {"q1", s.q1},  {"median", s.median},
                  {"q3", s.q3},       {"max", s.max},   {"mean", s.mean}};
    };
    doc["entropy_summary"] = to_json(summarize(entropy));
    doc["min_entropy_summary"] = to_json(summarize(min_e));
  }
  doc["quantile_method"] = "linear interpolation between closest ranks";
  write_text(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p2panon: anonymity analysis for peer-to-peer transaction routing"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a configured experiment");
  add_common(run_cmd, run_flags, true);

  CommonFlags learn_flags;
  CLI::App* learn_cmd =
      app.add_subcommand("learn-subgraph", "Run the stem-overlay learning attack");
  add_common(learn_cmd, learn_flags, false);

  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  CLI::App* gen_cmd = app.add_subcommand("gen-topology", "Generate or load a topology");
  gen_cmd->add_option("--config", gen_config, "Topology (or full experiment) config")->required();
  gen_cmd->add_option("--seed", gen_seed, "Override the config seed");
  gen_cmd->add_option("--out", gen_out, "Output path (default stdout)");

  std::string sum_in, sum_out;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "Recompute aggregates from a records CSV");
  sum_cmd->add_option("--in", sum_in, "Records CSV path")->required();
  sum_cmd->add_option("--out", sum_out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (learn_cmd->parsed()) return cmd_learn(learn_flags);
    if (gen_cmd->parsed()) return cmd_gen_topology(gen_config, gen_seed, gen_out);
    if (sum_cmd->parsed()) return cmd_summarize(sum_in, sum_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
