// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0
//
// Config-driven experiment harness: validated experiment descriptions,
// scheme dispatch, and machine-readable reports. Reports are pure functions
// of (config, seed) regardless of the worker count.

#ifndef P2PANON_EXPERIMENT_HPP
#define P2PANON_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "p2panon/graph.hpp"
#include "p2panon/graph_ops.hpp"
#include "p2panon/metrics.hpp"
#include "p2panon/stem.hpp"
#include "p2panon/subgraph_learning.hpp"

namespace p2panon {

enum class Scheme : std::uint8_t { Dandelion, DandelionPP, Ln, SubgraphLearning };
enum class ReportFormat : std::uint8_t { Csv, Structured };

const char* to_string(Scheme s);
const char* to_string(ReportFormat f);

struct TopologySpec {
  std::string generator;      ///< line | quasi_4_regular | k_regular | weighted_random
  std::string snapshot_path;  ///< set instead of generator for real snapshots
  std::uint32_t n = 0;
  std::uint32_t out_k = 0;       ///< k_regular only
  std::uint32_t avg_degree = 0;  ///< weighted_random only
  double mean_fee = 1000.0;      ///< weighted_random only
};

struct AdversarySpec {
  AdversaryStrategy strategy = AdversaryStrategy::Random;
  bool use_fraction = true;
  double fraction = 0.0;
  std::uint32_t count = 0;

  std::uint32_t resolve(std::uint32_t n) const;
};

struct ExperimentConfig {
  Scheme scheme = Scheme::Dandelion;
  TopologySpec topology;
  AdversarySpec adversary;
  double p_f = 0.0;  ///< hop-by-hop and subgraph learning
  std::uint32_t runs = 1;
  std::uint32_t tx_per_node = 1;
  double amount = 1.0;                    ///< source-routed only
  std::uint32_t k = 1;                    ///< source-routed only
  double risk_factor = kDefaultRiskFactor;
  std::optional<PathEnumerationBounds> bounds;  ///< defaulted per overlay when absent
  std::uint64_t seed = 0;
  std::map<NodeId, double> prior_table;  ///< empty = uniform prior
  LearnOptions learn_options;            ///< subgraph learning only
  std::string output_path;
  ReportFormat format = ReportFormat::Csv;

  /// Effective configuration re-serialized in canonical form.
  nlohmann::json echo() const;
};

/// Validates and converts a configuration document, reporting every
/// violation (not just the first) through ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// One intercepted transaction.
struct TxRecord {
  std::uint32_t run = 0;
  std::string observation;
  double entropy_bits = 0.0;
  double min_entropy_bits = 0.0;
  std::uint32_t support = 0;
};

struct ExperimentReport {
  nlohmann::json config_echo;
  std::string version;
  /// Sorted by (run, observation key); one row per intercepted transaction.
  std::vector<TxRecord> records;
  std::uint64_t total_transactions = 0;
  std::uint64_t intercepted_transactions = 0;
  double intercept_fraction = 0.0;
  std::optional<Summary> entropy_summary;      ///< absent when nothing was intercepted
  std::optional<Summary> min_entropy_summary;  ///< absent when nothing was intercepted
  nlohmann::json extra;                        ///< scheme-specific metadata
  /// Informational only; never serialized, so emitted bytes stay a pure
  /// function of (config, seed).
  double wall_clock_seconds = 0.0;
};

/// Dispatches on cfg.scheme. Subgraph-learning configs are run through
/// run_subgraph_learning instead.
ExperimentReport run(const ExperimentConfig& cfg, unsigned workers = 1);

ExperimentReport run_hop_by_hop_experiment(const ExperimentConfig& cfg, unsigned workers = 1);
ExperimentReport run_ln_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

LearnedSubgraph run_subgraph_learning(const ExperimentConfig& cfg, unsigned workers = 1);
nlohmann::json learned_subgraph_document(const LearnedSubgraph& learned,
                                         const ExperimentConfig& cfg);

/// CSV with header run,observation,entropy_bits,min_entropy_bits,support.
/// Doubles are printed in shortest round-trip form, so aggregates can be
/// recomputed from the rows bit-exactly.
std::string report_to_csv(const ExperimentReport& report);
/// Aggregates and config echo, emitted next to the CSV.
nlohmann::json report_metadata(const ExperimentReport& report);
/// Single self-describing document (records + metadata).
nlohmann::json report_to_json(const ExperimentReport& report);

/// Writes the report; CSV format also writes "<path>.meta.json".
void write_report(const ExperimentReport& report, const std::string& path, ReportFormat format);

/// Rows of a records CSV, for recomputing aggregates.
std::vector<TxRecord> parse_records_csv(const std::string& text);

}  // namespace p2panon

#endif  // P2PANON_EXPERIMENT_HPP
