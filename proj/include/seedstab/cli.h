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

// Subcommands of the seedstab command-line tool. Each returns the process
// exit code and writes to the given streams, so tests can drive them
// in-process.

#ifndef SEEDSTAB_CLI_H_
#define SEEDSTAB_CLI_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seedstab/analysis.h"
#include "seedstab/report.h"

namespace seedstab {

struct EvalOptions {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::kJson;
};

struct CorrelateOptions {
  std::vector<std::filesystem::path> reports;
  std::filesystem::path sizes;
  SizeTransform transform = SizeTransform::kLog10;
  std::optional<std::filesystem::path> out;  // CSV of the sorted table
};

struct HeatmapOptions {
  std::vector<std::filesystem::path> reports;
  std::filesystem::path out;
};

int CmdEval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int CmdCorrelate(const CorrelateOptions& options, std::ostream& out,
                 std::ostream& err);
int CmdHeatmap(const HeatmapOptions& options, std::ostream& out,
               std::ostream& err);
int CmdValidate(const std::filesystem::path& report, std::ostream& out,
                std::ostream& err);

// Parses argv (argv[0] is the program name) and dispatches.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Task -> training size map from a JSON object file.
std::map<std::string, std::int64_t> LoadSizes(const std::filesystem::path& path);

}  // namespace seedstab

#endif  // SEEDSTAB_CLI_H_
