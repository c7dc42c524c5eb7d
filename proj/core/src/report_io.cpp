// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "p2panon/errors.hpp"
#include "p2panon/experiment.hpp"

namespace p2panon {

using nlohmann::json;

namespace {

/// Shortest representation that round-trips the exact double, so consumers
/// recomputing aggregates from the rows get bit-identical values.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json summary_json(const Summary& s) {
  return json{{"count", s.count}, {"min", s.min},   {"q1", s.q1},  {"median", s.median},
              {"q3", s.q3},       {"max", s.max},   {"mean", s.mean}};
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
  std::string out = "run,observation,entropy_bits,min_entropy_bits,support\n";
  for (const TxRecord& r : report.records) {
    out += std::to_string(r.run);
    out += ',';
    out += r.observation;
    out += ',';
    out += format_double(r.entropy_bits);
    out += ',';
    out += format_double(r.min_entropy_bits);
    out += ',';
    out += std::to_string(r.support);
    out += '\n';
  }
  return out;
}

json report_metadata(const ExperimentReport& report) {
  json meta;
  meta["version"] = report.version;
  meta["config"] = report.config_echo;
  meta["total_transactions"] = report.total_transactions;
  meta["intercepted_transactions"] = report.intercepted_transactions;
  meta["intercept_fraction"] = report.intercept_fraction;
  meta["entropy_summary"] =
      report.entropy_summary ? summary_json(*report.entropy_summary) : json(nullptr);
  meta["min_entropy_summary"] =
      report.min_entropy_summary ? summary_json(*report.min_entropy_summary) : json(nullptr);
  meta["quantile_method"] = "linear interpolation between closest ranks";
  if (!report.extra.is_null()) meta["details"] = report.extra;
  return meta;
}

json report_to_json(const ExperimentReport& report) {
  json doc = report_metadata(report);
  json records = json::array();
  for (const TxRecord& r : report.records) {
    records.push_back(json{{"run", r.run},
                           {"observation", r.observation},
                           {"entropy_bits", r.entropy_bits},
                           {"min_entropy_bits", r.min_entropy_bits},
                           {"support", r.support}});
  }
  doc["records"] = std::move(records);
  return doc;
}

void write_report(const ExperimentReport& report, const std::string& path,
                  ReportFormat format) {
  auto write_file = [](const std::string& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write output file: " + p);
    out << bytes;
    if (!out) throw Error("failed while writing output file: " + p);
  };
  if (format == ReportFormat::Csv) {
    write_file(path, report_to_csv(report));
    write_file(path + ".meta.json", report_metadata(report).dump(2) + "\n");
  } else {
    write_file(path, report_to_json(report).dump(2) + "\n");
  }
}

std::vector<TxRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("records CSV is empty");
  if (line != "run,observation,entropy_bits,min_entropy_bits,support") {
    throw ParseError("records CSV has an unexpected header: " + line);
  }
  std::vector<TxRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<std::string, 5> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 5; ++f) {
      std::size_t end = f == 4 ? line.size() : line.find(',', start);
      if (end == std::string::npos) {
        throw ParseError("records CSV line " + std::to_string(lineno) + ": expected 5 fields");
      }
      fields[f] = line.substr(start, end - start);
      start = end + 1;
    }
    TxRecord r;
    try {
      r.run = static_cast<std::uint32_t>(std::stoul(fields[0]));
      r.observation = fields[1];
      r.entropy_bits = std::stod(fields[2]);
      r.min_entropy_bits = std::stod(fields[3]);
      r.support = static_cast<std::uint32_t>(std::stoul(fields[4]));
    } catch (const std::exception&) {
      throw ParseError("records CSV line " + std::to_string(lineno) + ": malformed field");
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace p2panon
