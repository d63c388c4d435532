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

// Rendering of stability reports as markdown tables, CSV or JSON, and
// parsing of JSON reports back into memory.

#ifndef SEEDSTAB_REPORT_H_
#define SEEDSTAB_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedstab/core.h"

namespace seedstab {

enum class ReportFormat { kMarkdown, kCsv, kJson };

std::string_view ReportFormatName(ReportFormat format);
// "md", "csv", "json".
std::optional<ReportFormat> ParseReportFormat(std::string_view name);

struct RenderedReport {
  ReportFormat format = ReportFormat::kJson;
  std::string body;
};

// Markdown shows "mean (±spread)" cells in percent with two decimals. CSV and
// JSON keep full double precision in stored units.
RenderedReport RenderReport(const StabilityReport& report, ReportFormat format);

// Parses one JSON report. Throws kParseError or kSchemaError.
StabilityReport ParseReport(std::string_view json_text);
// Accepts a single report object or an array of them.
std::vector<StabilityReport> ParseReportBundle(std::string_view json_text);

// Fixed-point text with `decimals` digits, locale independent; never "-0.00".
std::string FormatFixed(double value, int decimals);

// Value as displayed: percent for fraction-valued quantities, raw otherwise.
double DisplayZeta(const StabilityReport& report, double value);
double DisplayConsistency(const StabilityReport& report, double value);

// "<task> <zeta_mean> <var> <con> <ccon>" with two decimals each.
std::string SummaryLine(const StabilityReport& report);

}  // namespace seedstab

#endif  // SEEDSTAB_REPORT_H_
