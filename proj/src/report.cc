/*
 * Copyright 2026 The Seedstab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seedstab/report.h"

#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "seedstab/stability.h"

namespace seedstab {
namespace {

using nlohmann::ordered_json;

std::string_view DisplayName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kAccuracy: return "Accuracy";
    case MetricKind::kPrecision: return "Precision";
    case MetricKind::kRecall: return "Recall";
    case MetricKind::kF1: return "F1";
    case MetricKind::kMcc: return "MCC";
    case MetricKind::kMae: return "MAE";
    case MetricKind::kMse: return "MSE";
    case MetricKind::kPearson: return "Pearson";
    case MetricKind::kSpearman: return "Spearman";
    case MetricKind::kExactMatch: return "Exact Match";
    case MetricKind::kTokenF1: return "Token F1";
  }
  return "?";
}

bool ConsistencyIsFraction(const ScorerSpec& scorer) {
  return scorer.kind != ScorerKind::kMetricBased ||
         IsFractionValued(scorer.metric.value_or(MetricKind::kAccuracy));
}

// Shortest text that parses back to the same double.
std::string Exact(double v) { return fmt::format("{}", v); }

std::string WithSpread(double mean, std::optional<double> spread) {
  std::string cell = FormatFixed(mean, 2);
  if (spread.has_value()) cell += " (±" + FormatFixed(*spread, 2) + ")";
  return cell;
}

std::string RenderMarkdown(const StabilityReport& r) {
  const std::string_view metric = DisplayName(r.metric);
  std::optional<double> con_spread;
  std::optional<double> ccon_spread;
  if (!r.pairs.empty()) {
    std::vector<double> cons, ccons;
    for (const auto& p : r.pairs) {
      cons.push_back(p.con);
      ccons.push_back(p.ccon);
    }
    con_spread = DisplayConsistency(r, Var(cons));
    ccon_spread = DisplayConsistency(r, Var(ccons));
  }

  std::string out;
  out += fmt::format("| Task | {} | CON | CCON |\n", metric);
  out += "|:-----|------:|------:|------:|\n";
  out += fmt::format("| {} | {} | {} | {} |\n", r.task,
                     WithSpread(DisplayZeta(r, r.zeta_mean),
                                DisplayZeta(r, r.var)),
                     WithSpread(DisplayConsistency(r, r.con_mean), con_spread),
                     WithSpread(DisplayConsistency(r, r.ccon_mean), ccon_spread));
  if (!r.zeta_per_seed.empty()) {
    out += fmt::format("\n| Seed | {} |\n", metric);
    out += "|-----:|------:|\n";
    for (const auto& [seed, zeta] : r.zeta_per_seed) {
      out += fmt::format("| {} | {} |\n", seed,
                         FormatFixed(DisplayZeta(r, zeta), 2));
    }
  }
  if (!r.pairs.empty()) {
    out += "\n| Seed A | Seed B | CON | CCON |\n";
    out += "|-----:|-----:|------:|------:|\n";
    for (const auto& p : r.pairs) {
      out += fmt::format("| {} | {} | {} | {} |\n", p.seed_a, p.seed_b,
                         FormatFixed(DisplayConsistency(r, p.con), 2),
                         FormatFixed(DisplayConsistency(r, p.ccon), 2));
    }
  }
  return out;
}

std::string RenderCsv(const StabilityReport& r) {
  std::string out = "row,seed,zeta,var,con,ccon\n";
  for (const auto& [seed, zeta] : r.zeta_per_seed) {
    out += fmt::format("seed,{},{},,,\n", seed, Exact(zeta));
  }
  out += fmt::format("aggregate,,{},{},{},{}\n", Exact(r.zeta_mean),
                     Exact(r.var), Exact(r.con_mean), Exact(r.ccon_mean));
  return out;
}

ordered_json ToJson(const StabilityReport& r) {
  ordered_json doc;
  doc["task"] = r.task;
  doc["metric"] = std::string(MetricName(r.metric));
  doc["orientation"] = std::string(OrientationName(r.orientation()));
  doc["scorer"] = ScorerSpecName(r.scorer);
  ordered_json seeds = ordered_json::array();
  for (const auto& [seed, zeta] : r.zeta_per_seed) {
    ordered_json entry;
    entry["seed"] = seed;
    entry["zeta"] = zeta;
    seeds.push_back(std::move(entry));
  }
  doc["zeta_per_seed"] = std::move(seeds);
  doc["zeta_mean"] = r.zeta_mean;
  doc["var"] = r.var;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : r.pairs) {
    ordered_json entry;
    entry["seed_a"] = p.seed_a;
    entry["seed_b"] = p.seed_b;
    entry["con"] = p.con;
    entry["ccon"] = p.ccon;
    pairs.push_back(std::move(entry));
  }
  doc["pairs"] = std::move(pairs);
  doc["con_mean"] = r.con_mean;
  doc["ccon_mean"] = r.ccon_mean;
  doc["train_size"] =
      r.train_size ? ordered_json(*r.train_size) : ordered_json(nullptr);
  return doc;
}

[[noreturn]] void SchemaFail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kSchemaError, field, why);
}

void CheckFields(const ordered_json& object,
                 const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, unused] : object.items()) {
    if (!allowed.contains(key)) SchemaFail(where + key, "unknown field");
  }
  for (const std::string& key : allowed) {
    if (key != "orientation" && key != "train_size" && !object.contains(key)) {
      SchemaFail(where + key, "missing required field");
    }
  }
}

double Number(const ordered_json& object, const std::string& key,
              const std::string& where) {
  const ordered_json& v = object.at(key);
  if (!v.is_number()) SchemaFail(where + key, "must be a number");
  return v.get<double>();
}

std::int64_t Integer(const ordered_json& object, const std::string& key,
                     const std::string& where) {
  const ordered_json& v = object.at(key);
  if (!v.is_number_integer()) SchemaFail(where + key, "must be an integer");
  return v.get<std::int64_t>();
}

StabilityReport FromJson(const ordered_json& doc) {
  if (!doc.is_object()) SchemaFail("", "report must be a JSON object");
  CheckFields(doc,
              {"task", "metric", "orientation", "scorer", "zeta_per_seed",
               "zeta_mean", "var", "pairs", "con_mean", "ccon_mean",
               "train_size"},
              "");
  StabilityReport r;
  if (!doc.at("task").is_string()) SchemaFail("task", "must be a string");
  r.task = doc.at("task").get<std::string>();
  if (!doc.at("metric").is_string()) SchemaFail("metric", "must be a string");
  auto metric = ParseMetricKind(doc.at("metric").get<std::string>());
  if (!metric) SchemaFail("metric", "unknown metric");
  r.metric = *metric;
  if (doc.contains("orientation") &&
      doc.at("orientation") != std::string(OrientationName(r.orientation()))) {
    SchemaFail("orientation", "does not match the metric");
  }
  if (!doc.at("scorer").is_string()) SchemaFail("scorer", "must be a string");
  r.scorer = ParseScorerSpec(doc.at("scorer").get<std::string>());

  const ordered_json& seeds = doc.at("zeta_per_seed");
  if (!seeds.is_array()) SchemaFail("zeta_per_seed", "must be an array");
  for (const ordered_json& entry : seeds) {
    if (!entry.is_object()) SchemaFail("zeta_per_seed", "entries must be objects");
    CheckFields(entry, {"seed", "zeta"}, "zeta_per_seed.");
    const std::int64_t seed = Integer(entry, "seed", "zeta_per_seed.");
    if (!r.zeta_per_seed.emplace(seed, Number(entry, "zeta", "zeta_per_seed."))
             .second) {
      throw Error(ErrorCode::kDuplicateSeed, std::to_string(seed),
                  "seed listed twice in zeta_per_seed");
    }
  }
  r.zeta_mean = Number(doc, "zeta_mean", "");
  r.var = Number(doc, "var", "");
  const ordered_json& pairs = doc.at("pairs");
  if (!pairs.is_array()) SchemaFail("pairs", "must be an array");
  for (const ordered_json& entry : pairs) {
    if (!entry.is_object()) SchemaFail("pairs", "entries must be objects");
    CheckFields(entry, {"seed_a", "seed_b", "con", "ccon"}, "pairs.");
    r.pairs.push_back({Integer(entry, "seed_a", "pairs."),
                       Integer(entry, "seed_b", "pairs."),
                       Number(entry, "con", "pairs."),
                       Number(entry, "ccon", "pairs.")});
  }
  r.con_mean = Number(doc, "con_mean", "");
  r.ccon_mean = Number(doc, "ccon_mean", "");
  if (doc.contains("train_size") && !doc.at("train_size").is_null()) {
    r.train_size = Integer(doc, "train_size", "");
  }
  return r;
}

ordered_json ParseJson(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "byte " + std::to_string(e.byte),
                e.what());
  }
}

}  // namespace

std::string_view ReportFormatName(ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdown: return "md";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kJson: return "json";
  }
  return "json";
}

std::optional<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "md") return ReportFormat::kMarkdown;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return std::nullopt;
}

std::string FormatFixed(double value, int decimals) {
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (!s.empty() && s.front() == '-' &&
      s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

double DisplayZeta(const StabilityReport& report, double value) {
  return IsFractionValued(report.metric) ? 100.0 * value : value;
}

double DisplayConsistency(const StabilityReport& report, double value) {
  return ConsistencyIsFraction(report.scorer) ? 100.0 * value : value;
}

RenderedReport RenderReport(const StabilityReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdown:
      return {format, RenderMarkdown(report)};
    case ReportFormat::kCsv:
      return {format, RenderCsv(report)};
    case ReportFormat::kJson:
      return {format, ToJson(report).dump(2) + "\n"};
  }
  return {format, ""};
}

StabilityReport ParseReport(std::string_view json_text) {
  return FromJson(ParseJson(json_text));
}

std::vector<StabilityReport> ParseReportBundle(std::string_view json_text) {
  const ordered_json doc = ParseJson(json_text);
  std::vector<StabilityReport> reports;
  if (doc.is_array()) {
    for (const ordered_json& entry : doc) reports.push_back(FromJson(entry));
  } else {
    reports.push_back(FromJson(doc));
  }
  return reports;
}

std::string SummaryLine(const StabilityReport& report) {
  return fmt::format("{} {} {} {} {}", report.task,
                     FormatFixed(DisplayZeta(report, report.zeta_mean), 2),
                     FormatFixed(DisplayZeta(report, report.var), 2),
                     FormatFixed(DisplayConsistency(report, report.con_mean), 2),
                     FormatFixed(DisplayConsistency(report, report.ccon_mean), 2));
}

}  // namespace seedstab
