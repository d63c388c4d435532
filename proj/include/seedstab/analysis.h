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

#ifndef SEEDSTAB_ANALYSIS_H_
#define SEEDSTAB_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedstab/core.h"

namespace seedstab {

enum class SizeTransform { kRaw, kLog10 };

std::string_view SizeTransformName(SizeTransform transform);
std::optional<SizeTransform> ParseSizeTransform(std::string_view name);

struct CorrelationSummary {
  double r_var = 0.0;
  double r_con = 0.0;
  double r_ccon = 0.0;
  SizeTransform size_transform = SizeTransform::kLog10;
  std::vector<std::string> tasks_included;  // ascending training size
};

// Pearson correlation of (transformed) training size against var, con_mean
// and ccon_mean across tasks. Throws kDuplicateTask, kMissingSize,
// kInvalidValue (non-positive size), kTooFewTasks (< 3) or kZeroVariance.
CorrelationSummary SizeCorrelations(
    std::span<const StabilityReport> reports,
    const std::map<std::string, std::int64_t>& sizes,
    SizeTransform transform = SizeTransform::kLog10);

using Matrix = std::vector<std::vector<double>>;

// Per-row min-max scaling to [0, 1]; a constant row maps to 0.5 everywhere.
// Throws kRowTooShort for rows with fewer than two entries.
Matrix NormalizeHeatmap(const Matrix& zeta);

// Checks the relations that any indicator or token-mean report must satisfy.
// Returns one human-readable line per violated relation; empty means valid.
// Throws kUnsupportedScorerKind for metric-based reports.
std::vector<std::string> ValidateReport(const StabilityReport& report);

}  // namespace seedstab

#endif  // SEEDSTAB_ANALYSIS_H_
