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

#include "seedstab/core.h"

#include <array>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

namespace seedstab {

OutputVariant VariantOf(const Output& output) {
  return static_cast<OutputVariant>(output.index());
}

std::string_view VariantName(OutputVariant variant) {
  switch (variant) {
    case OutputVariant::kLabel: return "label";
    case OutputVariant::kScalar: return "scalar";
    case OutputVariant::kTokenSeq: return "token_sequence";
    case OutputVariant::kText: return "text";
  }
  return "unknown";
}

namespace {

bool IsUnicodeWhitespace(char32_t cp) {
  if (cp >= 0x09 && cp <= 0x0D) return true;
  if (cp >= 0x2000 && cp <= 0x200A) return true;
  switch (cp) {
    case 0x20: case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return false;
  }
}

// Decodes one UTF-8 code point starting at `pos`. Malformed input decodes as
// a single opaque byte, which is never whitespace.
std::pair<char32_t, std::size_t> DecodeUtf8(std::string_view s,
                                            std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) return {lead, 1};
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len};
}

std::string_view kTaskKindNames[] = {"classification", "regression",
                                     "sequence_labeling", "text_generation",
                                     "qa"};

constexpr std::array<std::string_view, 11> kMetricNames = {
    "accuracy", "precision", "recall",   "f1",          "mcc",     "mae",
    "mse",      "pearson",   "spearman", "exact_match", "token_f1"};

constexpr std::array<std::string_view, 8> kExtensionScorers = {
    "bleu", "rouge", "bertscore", "uas", "las", "ndcg", "mrr", "map"};

}  // namespace

std::vector<std::string> NormalizeText(std::string_view raw) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const auto [cp, len] = DecodeUtf8(raw, pos);
    if (IsUnicodeWhitespace(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (len == 1 && cp < 0x80) {
      char c = raw[pos];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      current.push_back(c);
    } else {
      current.append(raw.substr(pos, len));
    }
    pos += len;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Text MakeText(std::string_view raw) { return Text{NormalizeText(raw)}; }

std::string_view TaskKindName(TaskKind kind) {
  return kTaskKindNames[static_cast<int>(kind)];
}

std::optional<TaskKind> ParseTaskKind(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kTaskKindNames[i] == name) return static_cast<TaskKind>(i);
  }
  return std::nullopt;
}

OutputVariant RequiredVariant(TaskKind kind) {
  switch (kind) {
    case TaskKind::kClassification: return OutputVariant::kLabel;
    case TaskKind::kRegression: return OutputVariant::kScalar;
    case TaskKind::kSequenceLabeling: return OutputVariant::kTokenSeq;
    case TaskKind::kTextGeneration:
    case TaskKind::kQa:
      return OutputVariant::kText;
  }
  return OutputVariant::kLabel;
}

namespace {

void CheckOutput(const Output& output, OutputVariant expected,
                 const std::string& id, std::string_view where) {
  const OutputVariant actual = VariantOf(output);
  if (actual != expected) {
    throw Error(ErrorCode::kVariantMismatch, id,
                std::string(where) + " holds a " +
                    std::string(VariantName(actual)) + " output, expected " +
                    std::string(VariantName(expected)));
  }
  if (const auto* s = std::get_if<Scalar>(&output);
      s != nullptr && !std::isfinite(s->value)) {
    throw Error(ErrorCode::kInvalidValue, id,
                std::string(where) + " holds a non-finite scalar");
  }
  if (const auto* t = std::get_if<TokenSeq>(&output);
      t != nullptr && t->tokens.empty()) {
    throw Error(ErrorCode::kInvalidValue, id,
                std::string(where) + " holds an empty token sequence");
  }
}

void CheckRunSet(const AlignedRunSet& candidate) {
  if (candidate.runs.empty()) {
    throw Error(ErrorCode::kEmptyRunSet, "", "no runs");
  }
  if (candidate.gold.empty()) {
    throw Error(ErrorCode::kEmptyRunSet, "", "gold set is empty");
  }
  if (candidate.train_size.has_value() && *candidate.train_size <= 0) {
    throw Error(ErrorCode::kInvalidValue, "train_size",
                "must be a positive integer");
  }
  const OutputVariant expected = RequiredVariant(candidate.task_kind);
  for (const auto& [id, output] : candidate.gold) {
    if (id.empty()) {
      throw Error(ErrorCode::kInvalidValue, id, "gold has an empty id");
    }
    CheckOutput(output, expected, id, "gold");
  }
  std::unordered_set<std::string_view> gold_ids;
  gold_ids.reserve(candidate.gold.size());
  for (const auto& [id, unused] : candidate.gold) gold_ids.insert(id);

  std::set<std::int64_t> seeds;
  for (const Run& run : candidate.runs) {
    const std::string where = "run seed " + std::to_string(run.seed);
    if (!seeds.insert(run.seed).second) {
      throw Error(ErrorCode::kDuplicateSeed, std::to_string(run.seed),
                  "seed appears in more than one run");
    }
    if (run.task != candidate.task) {
      throw Error(ErrorCode::kTaskMismatch, run.task,
                  where + " belongs to a different task than '" +
                      candidate.task + "'");
    }
    std::unordered_set<std::string_view> ids;
    ids.reserve(run.records.size());
    for (const PredictionRecord& record : run.records) {
      if (record.example_id.empty()) {
        throw Error(ErrorCode::kInvalidValue, "", where + " has an empty id");
      }
      if (!ids.insert(record.example_id).second) {
        throw Error(ErrorCode::kDuplicateId, record.example_id, where);
      }
      if (!gold_ids.contains(record.example_id)) {
        throw Error(ErrorCode::kUnknownId, record.example_id,
                    where + " has an id absent from gold");
      }
      CheckOutput(record.output, expected, record.example_id, where);
    }
    if (ids.size() != candidate.gold.size()) {
      for (const auto& [id, unused] : candidate.gold) {
        if (!ids.contains(id)) {
          throw Error(ErrorCode::kMissingId, id, where + " lacks a gold id");
        }
      }
    }
  }
}

}  // namespace

AlignedRunSet ValidateRunSet(const AlignedRunSet& candidate) {
  CheckRunSet(candidate);
  return candidate;
}

AlignedRunSet ValidateRunSet(AlignedRunSet&& candidate) {
  CheckRunSet(candidate);
  return std::move(candidate);
}

Orientation OrientationOf(MetricKind kind) {
  return (kind == MetricKind::kMae || kind == MetricKind::kMse)
             ? Orientation::kLowerBetter
             : Orientation::kHigherBetter;
}

std::string_view MetricName(MetricKind kind) {
  return kMetricNames[static_cast<std::size_t>(kind)];
}

std::string_view OrientationName(Orientation orientation) {
  return orientation == Orientation::kHigherBetter ? "higher_better"
                                                   : "lower_better";
}

std::optional<MetricKind> ParseMetricKind(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return static_cast<MetricKind>(i);
  }
  return std::nullopt;
}

bool IsFractionValued(MetricKind kind) {
  return OrientationOf(kind) == Orientation::kHigherBetter;
}

std::string ScorerSpecName(const ScorerSpec& spec) {
  switch (spec.kind) {
    case ScorerKind::kIndicator: return "indicator";
    case ScorerKind::kTokenMean: return "token_mean";
    case ScorerKind::kMetricBased:
      return "metric_based:" +
             std::string(MetricName(spec.metric.value_or(MetricKind::kAccuracy)));
  }
  return "indicator";
}

bool IsExtensionScorer(std::string_view name) {
  for (std::string_view ext : kExtensionScorers) {
    if (ext == name) return true;
  }
  return false;
}

ScorerSpec ParseScorerSpec(std::string_view name) {
  if (name == "indicator") return {ScorerKind::kIndicator, std::nullopt};
  if (name == "token_mean") return {ScorerKind::kTokenMean, std::nullopt};
  constexpr std::string_view kPrefix = "metric_based:";
  std::string_view metric_name = name;
  if (name.starts_with(kPrefix)) metric_name = name.substr(kPrefix.size());
  if (IsExtensionScorer(metric_name)) {
    throw Error(ErrorCode::kSchemaError, "scorer",
                "'" + std::string(metric_name) +
                    "' is an unimplemented extension scorer");
  }
  if (auto metric = ParseMetricKind(metric_name)) {
    return {ScorerKind::kMetricBased, *metric};
  }
  throw Error(ErrorCode::kSchemaError, "scorer",
              "unknown scorer '" + std::string(name) + "'");
}

}  // namespace seedstab
