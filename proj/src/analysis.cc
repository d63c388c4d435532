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

#include "seedstab/analysis.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "seedstab/metrics.h"

namespace seedstab {
namespace {

// Slack for relations between values that went through floating-point
// averaging.
constexpr double kSlack = 1e-12;

}  // namespace

std::string_view SizeTransformName(SizeTransform transform) {
  return transform == SizeTransform::kRaw ? "raw" : "log10";
}

std::optional<SizeTransform> ParseSizeTransform(std::string_view name) {
  if (name == "raw") return SizeTransform::kRaw;
  if (name == "log10") return SizeTransform::kLog10;
  return std::nullopt;
}

CorrelationSummary SizeCorrelations(
    std::span<const StabilityReport> reports,
    const std::map<std::string, std::int64_t>& sizes,
    SizeTransform transform) {
  struct Row {
    std::int64_t size;
    const StabilityReport* report;
  };
  std::vector<Row> rows;
  std::set<std::string_view> seen;
  for (const StabilityReport& r : reports) {
    if (!seen.insert(r.task).second) {
      throw Error(ErrorCode::kDuplicateTask, r.task,
                  "task appears in more than one report");
    }
    auto it = sizes.find(r.task);
    if (it == sizes.end()) {
      throw Error(ErrorCode::kMissingSize, r.task, "no training size");
    }
    if (it->second <= 0) {
      throw Error(ErrorCode::kInvalidValue, r.task,
                  "training size must be positive");
    }
    rows.push_back({it->second, &r});
  }
  if (rows.size() < 3) {
    throw Error(ErrorCode::kTooFewTasks, "",
                std::to_string(rows.size()) + " task(s); need at least 3");
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.report->task < b.report->task;
  });

  std::vector<double> xs, var, con, ccon;
  CorrelationSummary summary;
  summary.size_transform = transform;
  for (const Row& row : rows) {
    const auto size = static_cast<double>(row.size);
    xs.push_back(transform == SizeTransform::kLog10 ? std::log10(size) : size);
    var.push_back(row.report->var);
    con.push_back(row.report->con_mean);
    ccon.push_back(row.report->ccon_mean);
    summary.tasks_included.push_back(row.report->task);
  }
  summary.r_var = Pearson(xs, var);
  summary.r_con = Pearson(xs, con);
  summary.r_ccon = Pearson(xs, ccon);
  return summary;
}

Matrix NormalizeHeatmap(const Matrix& zeta) {
  Matrix out;
  out.reserve(zeta.size());
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const auto& row = zeta[i];
    if (row.size() < 2) {
      throw Error(ErrorCode::kRowTooShort, std::to_string(i),
                  "a row needs at least two entries");
    }
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    const double min = *lo;
    const double range = *hi - *lo;
    auto& normalized = out.emplace_back();
    normalized.reserve(row.size());
    for (double v : row) {
      normalized.push_back(range == 0.0 ? 0.5 : (v - min) / range);
    }
  }
  return out;
}

std::vector<std::string> ValidateReport(const StabilityReport& report) {
  if (report.scorer.kind == ScorerKind::kMetricBased) {
    throw Error(ErrorCode::kUnsupportedScorerKind,
                ScorerSpecName(report.scorer),
                "relations hold only for indicator and token_mean scorers");
  }
  std::vector<std::string> violations;
  auto check = [&](bool ok, std::string what) {
    if (!ok) violations.push_back(std::move(what));
  };

  check(std::isfinite(report.var) && report.var >= 0.0,
        fmt::format("var >= 0 (var = {})", report.var));
  check(report.con_mean <= 1.0 + kSlack,
        fmt::format("con_mean <= 1 (con_mean = {})", report.con_mean));
  check(report.ccon_mean >= -kSlack,
        fmt::format("ccon_mean >= 0 (ccon_mean = {})", report.ccon_mean));
  check(report.ccon_mean <= report.con_mean + kSlack,
        fmt::format("ccon_mean <= con_mean ({} > {})", report.ccon_mean,
                    report.con_mean));

  // Accuracy gives per-seed correctness rates that bound the pair scores.
  const bool accuracy = report.metric == MetricKind::kAccuracy;
  const bool indicator = report.scorer.kind == ScorerKind::kIndicator;
  if (accuracy) {
    const double zeta = report.zeta_mean;
    if (indicator) {
      check(report.ccon_mean <= zeta + kSlack,
            fmt::format("ccon_mean <= zeta_mean ({} > {})", report.ccon_mean,
                        zeta));
    }
    check(report.ccon_mean >= 2.0 * zeta - 1.0 - kSlack,
          fmt::format("ccon_mean >= 2 * zeta_mean - 1 ({} < {})",
                      report.ccon_mean, 2.0 * zeta - 1.0));
  }

  const std::size_t s = report.zeta_per_seed.size();
  if (s > 0) {
    check(report.pairs.size() == s * (s - 1) / 2,
          fmt::format("|pairs| = S(S-1)/2 ({} pairs for S = {})",
                      report.pairs.size(), s));
  } else {
    check(report.pairs.empty(), "pairs require per-seed values");
  }

  for (const PairConsistency& p : report.pairs) {
    const std::string tag = fmt::format("pair ({}, {})", p.seed_a, p.seed_b);
    check(p.seed_a < p.seed_b, tag + ": seed_a < seed_b");
    check(p.ccon >= -kSlack && p.ccon <= p.con + kSlack && p.con <= 1.0 + kSlack,
          fmt::format("{}: 0 <= ccon <= con <= 1 (ccon = {}, con = {})", tag,
                      p.ccon, p.con));
    auto a = report.zeta_per_seed.find(p.seed_a);
    auto b = report.zeta_per_seed.find(p.seed_b);
    if (a == report.zeta_per_seed.end() || b == report.zeta_per_seed.end()) {
      violations.push_back(tag + ": seeds must appear in zeta_per_seed");
      continue;
    }
    if (!accuracy) continue;
    const double lower = std::max(0.0, a->second + b->second - 1.0);
    check(p.con >= lower - kSlack,
          fmt::format("{}: con >= max(0, acc_a + acc_b - 1) ({} < {})", tag,
                      p.con, lower));
    check(p.ccon >= lower - kSlack,
          fmt::format("{}: ccon >= max(0, acc_a + acc_b - 1) ({} < {})", tag,
                      p.ccon, lower));
    if (indicator) {
      const double upper = std::min(a->second, b->second);
      check(p.ccon <= upper + kSlack,
            fmt::format("{}: ccon <= min(acc_a, acc_b) ({} > {})", tag, p.ccon,
                        upper));
    }
  }
  return violations;
}

}  // namespace seedstab
