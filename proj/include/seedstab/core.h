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

// Domain types shared by every module: model outputs, per-seed runs, the
// aligned run set that stability analysis consumes, and the report it
// produces.

#ifndef SEEDSTAB_CORE_H_
#define SEEDSTAB_CORE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seedstab/error.h"

namespace seedstab {

// A class label. Integer categories are stored in their decimal spelling.
struct Label {
  std::string value;
  bool operator==(const Label&) const = default;
};

// A finite real number.
struct Scalar {
  double value = 0.0;
  bool operator==(const Scalar&) const = default;
};

// Per-token labels of a sequence-labeling example. Never empty.
struct TokenSeq {
  std::vector<std::string> tokens;
  bool operator==(const TokenSeq&) const = default;
};

// Free text after normalization (see NormalizeText). May be empty.
struct Text {
  std::vector<std::string> tokens;
  bool operator==(const Text&) const = default;
};

using Output = std::variant<Label, Scalar, TokenSeq, Text>;

enum class OutputVariant { kLabel, kScalar, kTokenSeq, kText };

OutputVariant VariantOf(const Output& output);
std::string_view VariantName(OutputVariant variant);

// Lowercases ASCII letters and splits on Unicode whitespace. No stemming and
// no punctuation stripping, so the result is a pure function of the bytes.
std::vector<std::string> NormalizeText(std::string_view raw);
Text MakeText(std::string_view raw);

struct PredictionRecord {
  std::string example_id;
  Output output;
  bool operator==(const PredictionRecord&) const = default;
};

struct Run {
  std::int64_t seed = 0;
  std::string task;
  std::vector<PredictionRecord> records;
  bool operator==(const Run&) const = default;
};

enum class TaskKind {
  kClassification,
  kRegression,
  kSequenceLabeling,
  kTextGeneration,
  kQa,
};

std::string_view TaskKindName(TaskKind kind);
std::optional<TaskKind> ParseTaskKind(std::string_view name);
OutputVariant RequiredVariant(TaskKind kind);

using GoldLabels = std::map<std::string, Output>;

struct AlignedRunSet {
  std::string task;
  TaskKind task_kind = TaskKind::kClassification;
  std::vector<Run> runs;
  GoldLabels gold;
  std::optional<std::int64_t> train_size;

  std::size_t n_examples() const { return gold.size(); }
  bool operator==(const AlignedRunSet&) const = default;
};

// Checks every structural invariant and returns the set unchanged. Throws
// Error with kEmptyRunSet, kMissingId, kUnknownId, kDuplicateId,
// kDuplicateSeed, kVariantMismatch, kTaskMismatch or kInvalidValue.
AlignedRunSet ValidateRunSet(const AlignedRunSet& candidate);
AlignedRunSet ValidateRunSet(AlignedRunSet&& candidate);

enum class MetricKind {
  kAccuracy,
  kPrecision,
  kRecall,
  kF1,
  kMcc,
  kMae,
  kMse,
  kPearson,
  kSpearman,
  kExactMatch,
  kTokenF1,
};

enum class Orientation { kHigherBetter, kLowerBetter };

Orientation OrientationOf(MetricKind kind);
std::string_view MetricName(MetricKind kind);
std::string_view OrientationName(Orientation orientation);
std::optional<MetricKind> ParseMetricKind(std::string_view name);
// True when the metric's natural unit is a fraction that reports render as a
// percentage. False for error magnitudes (mae, mse).
bool IsFractionValued(MetricKind kind);

enum class ScorerKind { kIndicator, kTokenMean, kMetricBased };

// Serializable description of an agreement scorer. The metric is set only
// for kMetricBased.
struct ScorerSpec {
  ScorerKind kind = ScorerKind::kIndicator;
  std::optional<MetricKind> metric;
  bool operator==(const ScorerSpec&) const = default;
};

// "indicator", "token_mean", "metric_based:<metric>".
std::string ScorerSpecName(const ScorerSpec& spec);
// Accepts the spellings above plus a bare metric name as shorthand for
// metric_based. Names of scoring functions that exist only as extension
// slots (bleu, rouge, ...) raise kSchemaError.
ScorerSpec ParseScorerSpec(std::string_view name);
// Scorer names reserved for future text-generation, parsing and ranking
// scorers.
bool IsExtensionScorer(std::string_view name);

struct PairConsistency {
  std::int64_t seed_a = 0;
  std::int64_t seed_b = 0;
  double con = 0.0;
  double ccon = 0.0;
  bool operator==(const PairConsistency&) const = default;
};

// Values are stored in the metric's natural unit (fractions for accuracy,
// raw error units for mae); rendering converts to percentages.
struct StabilityReport {
  std::string task;
  MetricKind metric = MetricKind::kAccuracy;
  ScorerSpec scorer;
  std::map<std::int64_t, double> zeta_per_seed;
  double zeta_mean = 0.0;
  double var = 0.0;
  std::vector<PairConsistency> pairs;  // seed_a < seed_b, lexicographic
  double con_mean = 0.0;
  double ccon_mean = 0.0;
  std::optional<std::int64_t> train_size;

  Orientation orientation() const { return OrientationOf(metric); }
  bool operator==(const StabilityReport&) const = default;
};

}  // namespace seedstab

#endif  // SEEDSTAB_CORE_H_
