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

// Loading of prediction runs, gold labels and evaluation manifests.
//
// Run and gold files hold one JSON object per line:
//
//   {"id": "q1", "output": "entailment"}
//   {"id": "q2", "output": 3.25}
//   {"id": "q3", "output": ["B-PER", "I-PER", "O"]}
//
// Files whose name ends in ".csv" are read as two-column "id,output" CSV
// (classification and regression only); a leading "id,output" header line is
// skipped. LF and CRLF line endings are both accepted.

#ifndef SEEDSTAB_INGEST_H_
#define SEEDSTAB_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedstab/core.h"

namespace seedstab {

struct RunSource {
  std::int64_t seed = 0;
  std::filesystem::path path;
  bool operator==(const RunSource&) const = default;
};

struct EvaluationManifest {
  std::string task;
  TaskKind task_kind = TaskKind::kClassification;
  MetricKind metric = MetricKind::kAccuracy;
  ScorerSpec scorer;
  std::filesystem::path gold_path;  // resolved against the manifest directory
  std::vector<RunSource> runs;
  std::optional<std::int64_t> train_size;
  bool operator==(const EvaluationManifest&) const = default;
};

enum class RecordFormat { kJsonLines, kCsv };

// Parses a manifest document. Relative paths resolve against `base_dir`.
// Throws kParseError (with "line:column" as subject), kSchemaError (with the
// offending field as subject) or kDuplicateSeed.
EvaluationManifest ParseManifest(std::string_view text,
                                 const std::filesystem::path& base_dir);
EvaluationManifest LoadManifest(const std::filesystem::path& path);

// Reads records from a stream. `source` prefixes error locations.
std::vector<PredictionRecord> ParseRecords(std::istream& in, TaskKind kind,
                                           RecordFormat format,
                                           std::string_view source);

Run LoadRun(const std::filesystem::path& path, TaskKind kind,
            std::int64_t seed = 0, std::string task = "");
GoldLabels LoadGold(const std::filesystem::path& path, TaskKind kind);

// Loads every file named by the manifest and returns a validated set with
// runs in ascending seed order and records in ascending id order.
AlignedRunSet Assemble(const EvaluationManifest& manifest);

// Canonical JSON text of a run set; equal sets serialize to equal bytes.
std::string SerializeRunSet(const AlignedRunSet& set);

}  // namespace seedstab

#endif  // SEEDSTAB_INGEST_H_
