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

#include "seedstab/cli.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "seedstab/ingest.h"
#include "seedstab/stability.h"

namespace seedstab {
namespace {

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, path.string(), "cannot write file");
  }
  out << body;
  if (!out.flush()) {
    throw Error(ErrorCode::kIoError, path.string(), "write failed");
  }
}

std::vector<StabilityReport> LoadReports(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<StabilityReport> reports;
  for (const auto& path : paths) {
    try {
      for (StabilityReport& r : ParseReportBundle(ReadText(path))) {
        reports.push_back(std::move(r));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIoError) throw;
      throw Error(e.code(), e.subject(), path.string() + ": " + e.what());
    }
  }
  return reports;
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

std::map<std::string, std::int64_t> LoadSizes(const std::filesystem::path& path) {
  const std::string text = ReadText(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string(), e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kSchemaError, path.string(),
                "sizes file must map task names to integers");
  }
  std::map<std::string, std::int64_t> sizes;
  for (const auto& [task, value] : doc.items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() <= 0) {
      throw Error(ErrorCode::kSchemaError, task,
                  "training size must be a positive integer");
    }
    sizes.emplace(task, value.get<std::int64_t>());
  }
  return sizes;
}

int CmdEval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const EvaluationManifest manifest = LoadManifest(options.manifest);
    const AlignedRunSet set = Assemble(manifest);
    const StabilityReport report = AggregateStability(
        set, manifest.metric, AgreementScorer::FromSpec(manifest.scorer));
    if (options.out) {
      WriteText(*options.out, RenderReport(report, options.format).body);
    }
    out << SummaryLine(report) << "\n";
    return 0;
  });
}

int CmdCorrelate(const CorrelateOptions& options, std::ostream& out,
                 std::ostream& err) {
  return Guarded(err, [&] {
    const std::vector<StabilityReport> reports = LoadReports(options.reports);
    const auto sizes = LoadSizes(options.sizes);
    const CorrelationSummary summary =
        SizeCorrelations(reports, sizes, options.transform);
    if (options.out) {
      std::string csv = "task,size,var,con,ccon\n";
      for (const std::string& task : summary.tasks_included) {
        const auto it = std::find_if(
            reports.begin(), reports.end(),
            [&](const StabilityReport& r) { return r.task == task; });
        csv += fmt::format("{},{},{},{},{}\n", task, sizes.at(task), it->var,
                           it->con_mean, it->ccon_mean);
      }
      WriteText(*options.out, csv);
    }
    out << "r_var " << FormatFixed(summary.r_var, 4) << "\n"
        << "r_con " << FormatFixed(summary.r_con, 4) << "\n"
        << "r_ccon " << FormatFixed(summary.r_ccon, 4) << "\n";
    return 0;
  });
}

int CmdHeatmap(const HeatmapOptions& options, std::ostream& out,
               std::ostream& err) {
  return Guarded(err, [&] {
    const std::vector<StabilityReport> reports = LoadReports(options.reports);
    if (reports.empty()) {
      throw Error(ErrorCode::kEmptyInput, "", "no reports given");
    }
    const auto& reference = reports.front().zeta_per_seed;
    Matrix zeta;
    for (const StabilityReport& r : reports) {
      bool same = r.zeta_per_seed.size() == reference.size();
      for (auto a = r.zeta_per_seed.begin(), b = reference.begin();
           same && a != r.zeta_per_seed.end(); ++a, ++b) {
        same = a->first == b->first;
      }
      if (!same) {
        throw Error(ErrorCode::kSeedSetMismatch, r.task,
                    "seed set differs from task '" + reports.front().task + "'");
      }
      auto& row = zeta.emplace_back();
      for (const auto& [seed, value] : r.zeta_per_seed) row.push_back(value);
    }
    const Matrix normalized = NormalizeHeatmap(zeta);
    std::string csv = "task";
    for (const auto& [seed, unused] : reference) csv += fmt::format(",{}", seed);
    csv += "\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      csv += reports[i].task;
      for (double v : normalized[i]) csv += "," + FormatFixed(v, 4);
      csv += "\n";
    }
    WriteText(options.out, csv);
    out << "wrote " << reports.size() << " x " << reference.size()
        << " heatmap to " << options.out.string() << "\n";
    return 0;
  });
}

int CmdValidate(const std::filesystem::path& report, std::ostream& out,
                std::ostream& err) {
  return Guarded(err, [&] {
    const std::vector<StabilityReport> reports = LoadReports({report});
    std::vector<std::string> lines;
    for (const StabilityReport& r : reports) {
      for (const std::string& v : ValidateReport(r)) {
        lines.push_back(r.task + ": " + v);
      }
    }
    if (lines.empty()) {
      out << "OK\n";
      return 0;
    }
    for (const std::string& line : lines) out << "VIOLATION " << line << "\n";
    return 1;
  });
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Seed sensitivity analysis of per-seed prediction dumps",
               "seedstab"};
  app.require_subcommand(1);

  EvalOptions eval;
  std::string eval_out;
  std::string eval_format = "json";
  auto* eval_cmd = app.add_subcommand(
      "eval", "Compute zeta, VAR, CON and CCON for one manifest");
  eval_cmd->add_option("--manifest", eval.manifest, "Evaluation manifest")
      ->required();
  eval_cmd->add_option("--out", eval_out, "Report output path");
  eval_cmd->add_option("--format", eval_format, "Report format")
      ->check(CLI::IsMember({"md", "csv", "json"}));

  CorrelateOptions correlate;
  std::vector<std::string> correlate_reports;
  std::string correlate_out;
  std::string transform = "log10";
  auto* correlate_cmd = app.add_subcommand(
      "correlate", "Correlate training size with VAR, CON and CCON");
  correlate_cmd->add_option("reports", correlate_reports, "JSON reports")
      ->required();
  correlate_cmd->add_option("--sizes", correlate.sizes, "Task size map")
      ->required();
  correlate_cmd->add_option("--transform", transform, "Size transform")
      ->check(CLI::IsMember({"raw", "log10"}));
  correlate_cmd->add_option("--out", correlate_out, "CSV of sorted rows");

  HeatmapOptions heatmap;
  std::vector<std::string> heatmap_reports;
  auto* heatmap_cmd = app.add_subcommand(
      "heatmap", "Per-task min-max normalized zeta across seeds");
  heatmap_cmd->add_option("reports", heatmap_reports, "JSON reports")
      ->required();
  heatmap_cmd->add_option("--out", heatmap.out, "CSV output path")->required();

  std::string validate_path;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a report's consistency relations");
  validate_cmd->add_option("report", validate_path, "JSON report")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  if (eval_cmd->parsed()) {
    if (!eval_out.empty()) eval.out = eval_out;
    eval.format = *ParseReportFormat(eval_format);
    return CmdEval(eval, out, err);
  }
  if (correlate_cmd->parsed()) {
    correlate.reports.assign(correlate_reports.begin(), correlate_reports.end());
    correlate.transform = *ParseSizeTransform(transform);
    if (!correlate_out.empty()) correlate.out = correlate_out;
    return CmdCorrelate(correlate, out, err);
  }
  if (heatmap_cmd->parsed()) {
    heatmap.reports.assign(heatmap_reports.begin(), heatmap_reports.end());
    return CmdHeatmap(heatmap, out, err);
  }
  return CmdValidate(validate_path, out, err);
}

}  // namespace seedstab
