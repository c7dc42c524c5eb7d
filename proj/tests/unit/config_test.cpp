// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <string>

#include <json.hpp>

#include "p2panon/errors.hpp"
#include "p2panon/experiment.hpp"

using namespace p2panon;
using nlohmann::json;

namespace {

json minimal_dandelion() {
  return json{{"scheme", "dandelion"},
              {"topology", {{"generator", "line"}, {"n", 1000}}},
              {"p_f", 0.9},
              {"adversary", {{"strategy", "random"}, {"fraction", 0.01}}},
              {"runs", 1000},
              {"seed", 1}};
}

bool mentions(const ConfigError& e, const std::string& needle) {
  return std::any_of(e.violations().begin(), e.violations().end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

ExperimentConfig small_dandelion_config(std::uint32_t runs = 4) {
  json doc = minimal_dandelion();
  doc["topology"]["n"] = 40;
  doc["runs"] = runs;
  doc["adversary"] = {{"strategy", "random"}, {"count", 4}};
  return parse_config(doc);
}

}  // namespace

TEST_CASE("a minimal dandelion config is accepted") {
  ExperimentConfig cfg = parse_config(minimal_dandelion());
  CHECK(cfg.scheme == Scheme::Dandelion);
  CHECK(cfg.topology.n == 1000);
  CHECK(cfg.p_f == doctest::Approx(0.9));
  CHECK(cfg.adversary.use_fraction);
  CHECK(cfg.runs == 1000);
  CHECK(cfg.seed == 1);
  CHECK(cfg.tx_per_node == 1);
}

TEST_CASE("out-of-range p_f names the key") {
  json doc = minimal_dandelion();
  doc["p_f"] = 1.5;
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "p_f"));
  }
}

TEST_CASE("ln configs reject p_f as mutually exclusive") {
  json doc{{"scheme", "ln"},
           {"topology", {{"generator", "weighted_random"}, {"n", 100}, {"avg_degree", 5}}},
           {"p_f", 0.9},
           {"adversary", {{"strategy", "top_degree"}, {"fraction", 0.01}}}};
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "p_f"));
    CHECK(mentions(e, "not applicable"));
  }
}

TEST_CASE("every violation is reported, each with its path") {
  json doc{{"scheme", "dandelion"},
           {"topology", {{"generator", "line"}, {"n", 2}}},
           {"p_f", 2.0},
           {"adversary", {{"strategy", "sneaky"}, {"fraction", 1.5}}},
           {"mystery", 1}};
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 5);
    CHECK(mentions(e, "topology.n"));
    CHECK(mentions(e, "p_f"));
    CHECK(mentions(e, "adversary.strategy"));
    CHECK(mentions(e, "adversary.fraction"));
    CHECK(mentions(e, "mystery"));
  }
}

TEST_CASE("unknown nested keys are rejected") {
  json doc = minimal_dandelion();
  doc["topology"]["flavor"] = "spicy";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("missing snapshot files fail at validation time") {
  json doc{{"scheme", "ln"},
           {"topology", {{"snapshot", "/nonexistent/snapshot.json"}}},
           {"adversary", {{"strategy", "top_degree"}, {"count", 3}}}};
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "topology.snapshot"));
  }
}

TEST_CASE("dandelion requires the line overlay") {
  json doc = minimal_dandelion();
  doc["topology"]["generator"] = "quasi_4_regular";
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("stem schemes reject snapshot topologies") {
  json doc = minimal_dandelion();
  doc["topology"] = {{"snapshot", "/etc/hostname"}};  // exists, but wrong scheme
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "topology.snapshot"));
  }
}

TEST_CASE("reports are identical across worker counts") {
  ExperimentConfig cfg = small_dandelion_config();
  ExperimentReport serial = run(cfg, 1);
  ExperimentReport parallel = run(cfg, 8);
  CHECK(report_to_csv(serial) == report_to_csv(parallel));
  CHECK(report_metadata(serial).dump() == report_metadata(parallel).dump());
}

TEST_CASE("re-emitting a report is byte stable") {
  ExperimentConfig cfg = small_dandelion_config();
  ExperimentReport report = run(cfg, 2);
  CHECK(report_to_csv(report) == report_to_csv(report));
  CHECK(report_to_json(report).dump(2) == report_to_json(report).dump(2));
}

TEST_CASE("csv shape: header plus one row per record") {
  ExperimentConfig cfg = small_dandelion_config();
  ExperimentReport report = run(cfg, 1);
  std::string csv = report_to_csv(report);
  auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == report.records.size() + 1);
  CHECK(csv.rfind("run,observation,entropy_bits,min_entropy_bits,support\n", 0) == 0);
}

TEST_CASE("reports with no interceptions emit a header-only csv") {
  // A single random adversary in a small routed graph can fall outside
  // every drawn best path.
  json doc{{"scheme", "ln"},
           {"topology", {{"generator", "weighted_random"}, {"n", 20}, {"avg_degree", 4}}},
           {"adversary", {{"strategy", "random"}, {"count", 1}}}};
  ExperimentConfig cfg = parse_config(doc);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = seed;
    ExperimentReport report = run(cfg, 1);
    if (report.intercepted_transactions == 0) {
      CHECK(report_to_csv(report) ==
            "run,observation,entropy_bits,min_entropy_bits,support\n");
      CHECK(report.intercept_fraction == 0.0);
      CHECK_FALSE(report.entropy_summary.has_value());
      json meta = report_metadata(report);
      CHECK(meta.at("entropy_summary").is_null());
      return;
    }
  }
  FAIL("no zero-interception seed found");
}

TEST_CASE("aggregates are recomputable from the emitted rows bit-exactly") {
  ExperimentConfig cfg = small_dandelion_config(6);
  ExperimentReport report = run(cfg, 3);
  REQUIRE(report.entropy_summary.has_value());

  auto records = parse_records_csv(report_to_csv(report));
  REQUIRE(records.size() == report.records.size());
  std::vector<double> entropies;
  for (const auto& r : records) entropies.push_back(r.entropy_bits);
  Summary recomputed = summarize(entropies);
  CHECK(recomputed.median == report.entropy_summary->median);
  CHECK(recomputed.q1 == report.entropy_summary->q1);
  CHECK(recomputed.q3 == report.entropy_summary->q3);
  CHECK(recomputed.mean == report.entropy_summary->mean);
  CHECK(recomputed.min == report.entropy_summary->min);
  CHECK(recomputed.max == report.entropy_summary->max);
}

TEST_CASE("records are ordered by run then observation key") {
  ExperimentConfig cfg = small_dandelion_config(5);
  ExperimentReport report = run(cfg, 4);
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    const auto& a = report.records[i - 1];
    const auto& b = report.records[i];
    CHECK((a.run < b.run || (a.run == b.run && a.observation <= b.observation)));
  }
}

TEST_CASE("dandelion++ and ln experiments run end to end") {
  json dpp{{"scheme", "dandelion_pp"},
           {"topology", {{"generator", "quasi_4_regular"}, {"n", 60}}},
           {"p_f", 0.9},
           {"adversary", {{"strategy", "random"}, {"count", 6}}},
           {"runs", 3},
           {"seed", 5}};
  ExperimentReport dpp_report = run(parse_config(dpp), 2);
  CHECK(dpp_report.total_transactions == 3 * 54);
  CHECK(dpp_report.intercepted_transactions > 0);

  json ln{{"scheme", "ln"},
          {"topology", {{"generator", "weighted_random"}, {"n", 60}, {"avg_degree", 4}}},
          {"adversary", {{"strategy", "top_degree"}, {"count", 3}}},
          {"seed", 5}};
  ExperimentReport ln_report = run(parse_config(ln), 2);
  CHECK(ln_report.total_transactions > 0);
  CHECK(ln_report.intercepted_transactions > 0);
  CHECK(ln_report.extra.at("scheme") == "ln");

  ExperimentReport ln_again = run(parse_config(ln), 7);
  CHECK(report_to_csv(ln_report) == report_to_csv(ln_again));
}

TEST_CASE("subgraph learning runs through the harness") {
  json doc{{"scheme", "subgraph_learning"},
           {"topology", {{"generator", "k_regular"}, {"n", 60}, {"out_k", 8}}},
           {"p_f", 0.9},
           {"adversary", {{"strategy", "random"}, {"fraction", 0.1}}},
           {"tx_per_node", 50},
           {"seed", 2}};
  ExperimentConfig cfg = parse_config(doc);
  LearnedSubgraph learned = run_subgraph_learning(cfg, 2);
  CHECK(learned.accuracy > 0.5);
  json report = learned_subgraph_document(learned, cfg);
  CHECK(report.at("accuracy").get<double>() == learned.accuracy);
  CHECK(report.at("targets").size() == learned.targets.size());

  CHECK_THROWS_AS(run(cfg, 1), InvalidParameterError);
}

TEST_CASE("fraction and count are mutually exclusive") {
  json doc = minimal_dandelion();
  doc["adversary"] = {{"strategy", "random"}, {"fraction", 0.1}, {"count", 5}};
  try {
    parse_config(doc);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "mutually exclusive"));
  }
}

TEST_CASE("an explicit prior table flows through the harness") {
  json doc = minimal_dandelion();
  doc["topology"]["n"] = 30;
  doc["runs"] = 2;
  doc["adversary"] = {{"strategy", "random"}, {"count", 2}};
  json table;
  for (int v = 0; v < 30; ++v) table[std::to_string(v)] = 1.0;
  doc["prior"] = {{"table", table}};
  ExperimentConfig cfg = parse_config(doc);
  CHECK(cfg.prior_table.size() == 30);
  CHECK(cfg.echo().at("prior").at("table").size() == 30);

  // A uniform explicit table reproduces the uniform-prior report exactly.
  ExperimentReport with_table = run(cfg, 1);
  json plain = doc;
  plain["prior"] = "uniform";
  ExperimentReport uniform = run(parse_config(plain), 1);
  CHECK(report_to_csv(with_table) == report_to_csv(uniform));
}

TEST_CASE("module failures carry the run index") {
  json doc = minimal_dandelion();
  doc["topology"]["n"] = 30;
  doc["runs"] = 3;
  doc["adversary"] = {{"strategy", "random"}, {"count", 2}};
  json table;
  table["5000"] = 1.0;  // out of range for every run's topology
  doc["prior"] = {{"table", table}};
  ExperimentConfig cfg = parse_config(doc);
  try {
    run(cfg, 1);
    FAIL("expected a wrapped module error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("run ") != std::string::npos);
  }
}

TEST_CASE("config echo is canonical and self-describing") {
  ExperimentConfig cfg = parse_config(minimal_dandelion());
  json echo = cfg.echo();
  CHECK(echo.at("scheme") == "dandelion");
  CHECK(echo.at("prior") == "uniform");
  CHECK(echo.at("topology").at("generator") == "line");
  CHECK(echo.dump() == parse_config(minimal_dandelion()).echo().dump());
}
