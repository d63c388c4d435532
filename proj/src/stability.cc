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

#include "seedstab/stability.h"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "seedstab/metrics.h"
#include "seedstab/numeric.h"

namespace seedstab {
namespace {

double OneIf(bool b) { return b ? 1.0 : 0.0; }

void RequireSameVariant(const Output& a, const Output& b) {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::kVariantMismatch, "",
                std::string(VariantName(VariantOf(a))) + " vs " +
                    std::string(VariantName(VariantOf(b))));
  }
}

const std::vector<std::string>& Tokens(const Output& o) {
  const auto* seq = std::get_if<TokenSeq>(&o);
  if (seq == nullptr) {
    throw Error(ErrorCode::kVariantMismatch, "",
                "token_mean scorer needs token sequences, got " +
                    std::string(VariantName(VariantOf(o))));
  }
  return seq->tokens;
}

[[noreturn]] void UnsupportedMetric(MetricKind metric, const Output& o) {
  throw Error(ErrorCode::kUnsupportedKindForVariant,
              std::string(MetricName(metric)),
              "no per-example form for " +
                  std::string(VariantName(VariantOf(o))) + " outputs");
}

double PerExampleMetric(MetricKind metric, const Output& a, const Output& b) {
  RequireSameVariant(a, b);
  switch (metric) {
    case MetricKind::kAccuracy:
      return OneIf(a == b);
    case MetricKind::kMae:
    case MetricKind::kMse: {
      const auto* x = std::get_if<Scalar>(&a);
      if (x == nullptr) UnsupportedMetric(metric, a);
      const double d = x->value - std::get<Scalar>(b).value;
      return metric == MetricKind::kMae ? std::abs(d) : d * d;
    }
    case MetricKind::kExactMatch:
    case MetricKind::kTokenF1: {
      const auto* x = std::get_if<Text>(&a);
      if (x == nullptr) UnsupportedMetric(metric, a);
      const auto& y = std::get<Text>(b);
      return metric == MetricKind::kExactMatch ? ExactMatch(*x, y)
                                               : TokenF1(*x, y);
    }
    default:
      UnsupportedMetric(metric, a);
  }
}

// Runs' outputs laid out in gold id order.
std::vector<const Output*> AlignToGold(const Run& run, const GoldLabels& gold) {
  std::vector<const Output*> column;
  column.reserve(gold.size());
  if (run.records.size() == gold.size()) {
    auto g = gold.begin();
    for (const PredictionRecord& r : run.records) {
      if (r.example_id != g->first) break;
      column.push_back(&r.output);
      ++g;
    }
    if (column.size() == gold.size()) return column;
    column.clear();
  }
  std::unordered_map<std::string_view, const Output*> by_id;
  by_id.reserve(run.records.size());
  for (const PredictionRecord& r : run.records) {
    if (!by_id.emplace(r.example_id, &r.output).second) {
      throw Error(ErrorCode::kDuplicateId, r.example_id,
                  "run seed " + std::to_string(run.seed));
    }
  }
  if (by_id.size() != gold.size()) {
    throw Error(ErrorCode::kMisalignedRuns, "",
                "run seed " + std::to_string(run.seed) + " has " +
                    std::to_string(by_id.size()) + " ids, gold has " +
                    std::to_string(gold.size()));
  }
  for (const auto& [id, unused] : gold) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMisalignedRuns, id,
                  "run seed " + std::to_string(run.seed) + " lacks this id");
    }
    column.push_back(it->second);
  }
  return column;
}

// (a, b) output pairs joined by id, in ascending id order.
std::vector<std::pair<const PredictionRecord*, const Output*>> JoinRuns(
    const Run& run_a, const Run& run_b) {
  if (run_a.records.empty() && run_b.records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "", "runs have no records");
  }
  std::unordered_map<std::string_view, const Output*> b_by_id;
  b_by_id.reserve(run_b.records.size());
  for (const PredictionRecord& r : run_b.records) {
    b_by_id.emplace(r.example_id, &r.output);
  }
  if (b_by_id.size() != run_a.records.size() ||
      run_b.records.size() != run_a.records.size()) {
    throw Error(ErrorCode::kMisalignedRuns, "",
                "runs cover different id sets");
  }
  std::vector<std::pair<const PredictionRecord*, const Output*>> joined;
  joined.reserve(run_a.records.size());
  for (const PredictionRecord& r : run_a.records) {
    auto it = b_by_id.find(r.example_id);
    if (it == b_by_id.end()) {
      throw Error(ErrorCode::kMisalignedRuns, r.example_id,
                  "id present in only one run");
    }
    joined.emplace_back(&r, it->second);
  }
  std::sort(joined.begin(), joined.end(), [](const auto& x, const auto& y) {
    return x.first->example_id < y.first->example_id;
  });
  return joined;
}

}  // namespace

double Var(std::span<const double> values, Scale scale) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "", "no values");
  // A rounded mean can differ from a repeated value by one ulp.
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    return 0.0;
  }
  const double mean = Mean(values);
  CompensatedSum acc;
  for (double v : values) acc.Add((v - mean) * (v - mean));
  const double sd = std::sqrt(acc.Total() / static_cast<double>(values.size()));
  return scale == Scale::kPercent ? 100.0 * sd : sd;
}

AgreementScorer AgreementScorer::Indicator() {
  return AgreementScorer({ScorerKind::kIndicator, std::nullopt});
}

AgreementScorer AgreementScorer::TokenMean() {
  return AgreementScorer({ScorerKind::kTokenMean, std::nullopt});
}

AgreementScorer AgreementScorer::MetricBased(MetricKind metric) {
  switch (metric) {
    case MetricKind::kAccuracy:
    case MetricKind::kMae:
    case MetricKind::kMse:
    case MetricKind::kExactMatch:
    case MetricKind::kTokenF1:
      return AgreementScorer({ScorerKind::kMetricBased, metric});
    default:
      throw Error(ErrorCode::kUnsupportedKindForVariant,
                  std::string(MetricName(metric)),
                  "metric has no per-example form usable as a scorer");
  }
}

AgreementScorer AgreementScorer::FromSpec(const ScorerSpec& spec) {
  switch (spec.kind) {
    case ScorerKind::kIndicator: return Indicator();
    case ScorerKind::kTokenMean: return TokenMean();
    case ScorerKind::kMetricBased:
      if (!spec.metric.has_value()) {
        throw Error(ErrorCode::kSchemaError, "scorer",
                    "metric_based scorer without a metric");
      }
      return MetricBased(*spec.metric);
  }
  return Indicator();
}

double AgreementScorer::PairScore(const Output& a, const Output& b) const {
  switch (spec_.kind) {
    case ScorerKind::kIndicator:
      RequireSameVariant(a, b);
      return OneIf(a == b);
    case ScorerKind::kTokenMean: {
      const auto& ta = Tokens(a);
      const auto& tb = Tokens(b);
      if (ta.size() != tb.size() || ta.empty()) {
        throw Error(ErrorCode::kTokenLengthMismatch, "",
                    std::to_string(ta.size()) + " vs " +
                        std::to_string(tb.size()) + " tokens");
      }
      std::size_t hits = 0;
      for (std::size_t t = 0; t < ta.size(); ++t) hits += ta[t] == tb[t];
      return static_cast<double>(hits) / static_cast<double>(ta.size());
    }
    case ScorerKind::kMetricBased:
      return PerExampleMetric(*spec_.metric, a, b);
  }
  return 0.0;
}

double AgreementScorer::CorrectScore(const Output& a, const Output& b,
                                     const Output& r) const {
  switch (spec_.kind) {
    case ScorerKind::kIndicator:
      RequireSameVariant(a, b);
      RequireSameVariant(a, r);
      return OneIf(a == b && b == r);
    case ScorerKind::kTokenMean: {
      const auto& ta = Tokens(a);
      const auto& tb = Tokens(b);
      const auto& tr = Tokens(r);
      if (ta.size() != tb.size() || ta.size() != tr.size() || ta.empty()) {
        throw Error(ErrorCode::kTokenLengthMismatch, "",
                    std::to_string(ta.size()) + " vs " +
                        std::to_string(tb.size()) + " vs " +
                        std::to_string(tr.size()) + " tokens");
      }
      std::size_t hits = 0;
      for (std::size_t t = 0; t < ta.size(); ++t) {
        hits += ta[t] == tb[t] && tb[t] == tr[t];
      }
      return static_cast<double>(hits) / static_cast<double>(ta.size());
    }
    case ScorerKind::kMetricBased:
      return (PerExampleMetric(*spec_.metric, a, r) +
              PerExampleMetric(*spec_.metric, b, r)) /
             2.0;
  }
  return 0.0;
}

AgreementScorer IndicatorScorer() { return AgreementScorer::Indicator(); }
AgreementScorer TokenMeanScorer() { return AgreementScorer::TokenMean(); }
AgreementScorer MetricScorer(MetricKind metric) {
  return AgreementScorer::MetricBased(metric);
}

double PairConsistency(const Run& run_a, const Run& run_b,
                       const AgreementScorer& scorer) {
  const auto joined = JoinRuns(run_a, run_b);
  CompensatedSum acc;
  for (const auto& [a, b] : joined) acc.Add(scorer.PairScore(a->output, *b));
  return acc.Total() / static_cast<double>(joined.size());
}

double PairCorrectConsistency(const Run& run_a, const Run& run_b,
                              const GoldLabels& gold,
                              const AgreementScorer& scorer) {
  const auto joined = JoinRuns(run_a, run_b);
  CompensatedSum acc;
  for (const auto& [a, b] : joined) {
    auto it = gold.find(a->example_id);
    if (it == gold.end()) {
      throw Error(ErrorCode::kMissingGold, a->example_id, "no gold output");
    }
    acc.Add(scorer.CorrectScore(a->output, *b, it->second));
  }
  return acc.Total() / static_cast<double>(joined.size());
}

namespace {

struct SeedColumns {
  std::vector<const Run*> runs;  // ascending seed
  std::vector<std::vector<Output>> columns;
  std::vector<Output> gold;
};

SeedColumns BuildColumns(const AlignedRunSet& set) {
  SeedColumns out;
  for (const Run& run : set.runs) out.runs.push_back(&run);
  std::sort(out.runs.begin(), out.runs.end(),
            [](const Run* a, const Run* b) { return a->seed < b->seed; });
  for (std::size_t i = 1; i < out.runs.size(); ++i) {
    if (out.runs[i]->seed == out.runs[i - 1]->seed) {
      throw Error(ErrorCode::kDuplicateSeed, std::to_string(out.runs[i]->seed),
                  "seed appears in more than one run");
    }
  }
  out.gold.reserve(set.gold.size());
  for (const auto& [id, output] : set.gold) out.gold.push_back(output);
  for (const Run* run : out.runs) {
    const auto aligned = AlignToGold(*run, set.gold);
    std::vector<Output>& column = out.columns.emplace_back();
    column.reserve(aligned.size());
    for (const Output* o : aligned) column.push_back(*o);
  }
  return out;
}

SeedEvaluation EvaluateColumns(const SeedColumns& cols, MetricKind metric) {
  SeedEvaluation eval;
  std::vector<double> zetas;
  for (std::size_t i = 0; i < cols.runs.size(); ++i) {
    const double zeta = EvaluateMetric(metric, cols.columns[i], cols.gold);
    eval.zeta_per_seed.emplace(cols.runs[i]->seed, zeta);
    zetas.push_back(zeta);
  }
  eval.zeta_mean = Mean(zetas);
  eval.var = Var(zetas, Scale::kFraction);
  return eval;
}

}  // namespace

SeedEvaluation EvaluateSeeds(const AlignedRunSet& set, MetricKind metric) {
  if (set.runs.empty()) throw Error(ErrorCode::kEmptyRunSet, "", "no runs");
  return EvaluateColumns(BuildColumns(set), metric);
}

StabilityReport AggregateStability(const AlignedRunSet& set, MetricKind metric,
                                   const AgreementScorer& scorer) {
  if (set.runs.size() < 2) {
    throw Error(ErrorCode::kNeedAtLeastTwoRuns, "",
                std::to_string(set.runs.size()) + " run(s) given");
  }
  const SeedColumns cols = BuildColumns(set);
  const SeedEvaluation eval = EvaluateColumns(cols, metric);

  StabilityReport report;
  report.task = set.task;
  report.metric = metric;
  report.scorer = scorer.spec();
  report.zeta_per_seed = eval.zeta_per_seed;
  report.zeta_mean = eval.zeta_mean;
  report.var = eval.var;
  report.train_size = set.train_size;

  const std::size_t n = cols.gold.size();
  const std::size_t s = cols.runs.size();
  std::vector<double> cons;
  std::vector<double> ccons;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      const auto& a = cols.columns[i];
      const auto& b = cols.columns[j];
      CompensatedSum con;
      CompensatedSum ccon;
      for (std::size_t t = 0; t < n; ++t) {
        con.Add(scorer.PairScore(a[t], b[t]));
        ccon.Add(scorer.CorrectScore(a[t], b[t], cols.gold[t]));
      }
      const double dn = static_cast<double>(n);
      report.pairs.push_back({cols.runs[i]->seed, cols.runs[j]->seed,
                              con.Total() / dn, ccon.Total() / dn});
      cons.push_back(report.pairs.back().con);
      ccons.push_back(report.pairs.back().ccon);
    }
  }
  report.con_mean = Mean(cons);
  report.ccon_mean = Mean(ccons);
  return report;
}

}  // namespace seedstab
