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

// Python bindings. Reports cross the boundary as their JSON rendering so the
// Python side sees the same schema the CLI writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "seedstab/analysis.h"
#include "seedstab/cli.h"
#include "seedstab/ingest.h"
#include "seedstab/metrics.h"
#include "seedstab/report.h"
#include "seedstab/stability.h"

namespace py = pybind11;

namespace seedstab {
namespace {

Output ToOutput(const py::handle& value, TaskKind kind) {
  switch (kind) {
    case TaskKind::kClassification:
      if (py::isinstance<py::bool_>(value)) break;
      if (py::isinstance<py::int_>(value)) {
        return Label{py::str(value).cast<std::string>()};
      }
      if (py::isinstance<py::str>(value)) return Label{value.cast<std::string>()};
      break;
    case TaskKind::kRegression:
      if (py::isinstance<py::float_>(value) || py::isinstance<py::int_>(value)) {
        return Scalar{value.cast<double>()};
      }
      break;
    case TaskKind::kSequenceLabeling:
      if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
        return TokenSeq{value.cast<std::vector<std::string>>()};
      }
      break;
    case TaskKind::kTextGeneration:
    case TaskKind::kQa:
      if (py::isinstance<py::str>(value)) return MakeText(value.cast<std::string>());
      break;
  }
  throw Error(ErrorCode::kVariantMismatch, py::repr(value).cast<std::string>(),
              "value does not fit a " + std::string(TaskKindName(kind)) + " task");
}

std::vector<Output> ToOutputs(const py::sequence& values, TaskKind kind) {
  std::vector<Output> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(ToOutput(v, kind));
  return out;
}

std::vector<Output> ToLabels(const py::sequence& values) {
  return ToOutputs(values, TaskKind::kClassification);
}

TaskKind TaskKindArg(const std::string& name) {
  const auto kind = ParseTaskKind(name);
  if (!kind) throw Error(ErrorCode::kSchemaError, "task_kind", "unknown task kind");
  return *kind;
}

MetricKind MetricArg(const std::string& name) {
  const auto metric = ParseMetricKind(name);
  if (!metric) throw Error(ErrorCode::kSchemaError, "metric", "unknown metric");
  return *metric;
}

AlignedRunSet BuildRunSet(const std::string& task, const std::string& task_kind,
                          const py::dict& gold, const py::dict& runs,
                          std::optional<std::int64_t> train_size) {
  const TaskKind kind = TaskKindArg(task_kind);
  AlignedRunSet set;
  set.task = task;
  set.task_kind = kind;
  set.train_size = train_size;
  for (const auto& [id, value] : gold) {
    set.gold.emplace(id.cast<std::string>(), ToOutput(value, kind));
  }
  for (const auto& [seed, records] : runs) {
    Run run{seed.cast<std::int64_t>(), task, {}};
    for (const auto& [id, value] : records.cast<py::dict>()) {
      run.records.push_back({id.cast<std::string>(), ToOutput(value, kind)});
    }
    set.runs.push_back(std::move(run));
  }
  return ValidateRunSet(std::move(set));
}

std::string ReportJson(const StabilityReport& report) {
  return RenderReport(report, ReportFormat::kJson).body;
}

}  // namespace
}  // namespace seedstab

PYBIND11_MODULE(_core, m) {
  using namespace seedstab;  // NOLINT
  m.doc() = "Seed-stability metrics core";

  static py::exception<Error> error(m, "SeedstabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::handle(error.ptr())(e.what());
      instance.attr("code") = std::string(ErrorCodeName(e.code()));
      instance.attr("subject") = e.subject();
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  m.def("normalize_text", &NormalizeText, py::arg("text"));

  m.def("accuracy", [](const py::sequence& p, const py::sequence& g) {
    return Accuracy(ToLabels(p), ToLabels(g));
  }, py::arg("preds"), py::arg("gold"));
  m.def("precision_recall_f1",
        [](const py::sequence& p, const py::sequence& g,
           std::optional<std::string> positive) {
          const Averaging avg =
              positive ? Averaging::Binary(*positive) : Averaging::Macro();
          const auto r = ComputePrecisionRecallF1(ToLabels(p), ToLabels(g), avg);
          return py::make_tuple(r.precision, r.recall, r.f1);
        },
        py::arg("preds"), py::arg("gold"), py::arg("positive") = py::none(),
        "Macro averaging unless a positive class is given.");
  m.def("mcc", [](const py::sequence& p, const py::sequence& g) {
    return Mcc(ToLabels(p), ToLabels(g));
  }, py::arg("preds"), py::arg("gold"));
  m.def("mae", [](const std::vector<double>& p, const std::vector<double>& g) {
    return Mae(p, g);
  }, py::arg("preds"), py::arg("gold"));
  m.def("mse", [](const std::vector<double>& p, const std::vector<double>& g) {
    return Mse(p, g);
  }, py::arg("preds"), py::arg("gold"));
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    return Pearson(x, y);
  }, py::arg("xs"), py::arg("ys"));
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
    return Spearman(x, y);
  }, py::arg("xs"), py::arg("ys"));
  m.def("exact_match", [](const std::string& a, const std::string& b) {
    return ExactMatch(a, b);
  }, py::arg("a"), py::arg("b"));
  m.def("token_f1", [](const std::string& a, const std::string& b) {
    return TokenF1(a, b);
  }, py::arg("a"), py::arg("b"));
  m.def("evaluate_metric",
        [](const std::string& metric, const py::sequence& p, const py::sequence& g,
           const std::string& task_kind) {
          const TaskKind kind = TaskKindArg(task_kind);
          return EvaluateMetric(MetricArg(metric), ToOutputs(p, kind), ToOutputs(g, kind));
        },
        py::arg("metric"), py::arg("preds"), py::arg("gold"),
        py::arg("task_kind") = "classification");

  m.def("var", [](const std::vector<double>& values, bool percent) {
    return Var(values, percent ? Scale::kPercent : Scale::kFraction);
  }, py::arg("values"), py::arg("percent") = false);

  m.def("aggregate",
        [](const std::string& task, const py::dict& gold, const py::dict& runs,
           const std::string& metric, const std::string& scorer,
           const std::string& task_kind, std::optional<std::int64_t> train_size) {
          const AlignedRunSet set = BuildRunSet(task, task_kind, gold, runs, train_size);
          return ReportJson(AggregateStability(
              set, MetricArg(metric), AgreementScorer::FromSpec(ParseScorerSpec(scorer))));
        },
        py::arg("task"), py::arg("gold"), py::arg("runs"),
        py::arg("metric") = "accuracy", py::arg("scorer") = "indicator",
        py::arg("task_kind") = "classification", py::arg("train_size") = py::none(),
        "Returns the report as JSON text.");

  m.def("evaluate_manifest", [](const std::filesystem::path& path) {
    const EvaluationManifest manifest = LoadManifest(path);
    return ReportJson(AggregateStability(Assemble(manifest), manifest.metric,
                                         AgreementScorer::FromSpec(manifest.scorer)));
  }, py::arg("path"));

  m.def("render_report", [](const std::string& report_json, const std::string& format) {
    const auto f = ParseReportFormat(format);
    if (!f) throw Error(ErrorCode::kSchemaError, "format", "expected md, csv or json");
    return RenderReport(ParseReport(report_json), *f).body;
  }, py::arg("report_json"), py::arg("format"));

  m.def("validate_report", [](const std::string& report_json) {
    return ValidateReport(ParseReport(report_json));
  }, py::arg("report_json"));

  m.def("size_correlations",
        [](const std::vector<std::string>& reports_json,
           const std::map<std::string, std::int64_t>& sizes, const std::string& transform) {
          const auto t = ParseSizeTransform(transform);
          if (!t) throw Error(ErrorCode::kSchemaError, "transform", "expected raw or log10");
          std::vector<StabilityReport> reports;
          for (const auto& text : reports_json) reports.push_back(ParseReport(text));
          const CorrelationSummary s = SizeCorrelations(reports, sizes, *t);
          py::dict out;
          out["r_var"] = s.r_var;
          out["r_con"] = s.r_con;
          out["r_ccon"] = s.r_ccon;
          out["size_transform"] = std::string(SizeTransformName(s.size_transform));
          out["tasks_included"] = s.tasks_included;
          return out;
        },
        py::arg("reports_json"), py::arg("sizes"), py::arg("transform") = "log10");

  m.def("normalize_heatmap", &NormalizeHeatmap, py::arg("zeta"));

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "seedstab");
    std::ostringstream out, err;
    const int code = RunCli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
