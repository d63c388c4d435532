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

// Macro variability (population standard deviation of a metric across seeds)
// and micro variability (pairwise prediction consistency CON and
// correct-consistency CCON) over an aligned set of runs.

#ifndef SEEDSTAB_STABILITY_H_
#define SEEDSTAB_STABILITY_H_

#include <cstdint>
#include <map>
#include <span>

#include "seedstab/core.h"

namespace seedstab {

enum class Scale { kFraction, kPercent };

// sqrt((1/S) * sum_i (v_i - mean)^2) over fraction-unit values. kPercent
// multiplies the result by 100, so Var(v, kPercent) == 100 * Var(v,
// kFraction) bit for bit. Throws kEmptyInput when `values` is empty.
double Var(std::span<const double> values, Scale scale = Scale::kFraction);

// Per-example agreement kernel between two runs, with and without the gold
// output.
//
//   indicator     pair = 1[a == b]          correct = 1[a == b == r]
//   token_mean    pair = mean_t 1[a_t==b_t] correct = mean_t 1[a_t==b_t==r_t]
//   metric_based  pair = m(a, b)            correct = (m(a, r) + m(b, r)) / 2
//
// Metric-based scorers support per-example metrics only: mae and mse on
// scalars, exact_match and token_f1 on text, accuracy on any variant.
class AgreementScorer {
 public:
  static AgreementScorer Indicator();
  static AgreementScorer TokenMean();
  // Throws kUnsupportedKindForVariant for metrics with no per-example form.
  static AgreementScorer MetricBased(MetricKind metric);
  static AgreementScorer FromSpec(const ScorerSpec& spec);

  ScorerKind kind() const { return spec_.kind; }
  const ScorerSpec& spec() const { return spec_; }

  double PairScore(const Output& a, const Output& b) const;
  double CorrectScore(const Output& a, const Output& b, const Output& r) const;

 private:
  explicit AgreementScorer(ScorerSpec spec) : spec_(spec) {}
  ScorerSpec spec_;
};

AgreementScorer IndicatorScorer();
AgreementScorer TokenMeanScorer();
AgreementScorer MetricScorer(MetricKind metric);

// CON: mean pair score over the examples of two runs, joined by id. Throws
// kMisalignedRuns unless both runs cover the same id set.
double PairConsistency(const Run& run_a, const Run& run_b,
                       const AgreementScorer& scorer);

// CCON: mean correct score. Throws kMissingGold when gold lacks an id.
double PairCorrectConsistency(const Run& run_a, const Run& run_b,
                              const GoldLabels& gold,
                              const AgreementScorer& scorer);

// Full report over every unordered seed pair. Runs are visited in ascending
// seed order and pairs are listed with seed_a < seed_b. Throws
// kNeedAtLeastTwoRuns for fewer than two runs.
StabilityReport AggregateStability(const AlignedRunSet& set, MetricKind metric,
                                   const AgreementScorer& scorer);

struct SeedEvaluation {
  std::map<std::int64_t, double> zeta_per_seed;
  double zeta_mean = 0.0;
  double var = 0.0;
};

// Metric-only evaluation of every run against gold. Valid for a single run.
SeedEvaluation EvaluateSeeds(const AlignedRunSet& set, MetricKind metric);

}  // namespace seedstab

#endif  // SEEDSTAB_STABILITY_H_
