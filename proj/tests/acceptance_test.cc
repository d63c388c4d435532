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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "seedstab/analysis.h"
#include "seedstab/cli.h"
#include "seedstab/metrics.h"
#include "seedstab/stability.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using namespace seedstab;  // NOLINT
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "seedstab");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("seedstab_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<AlignedRunSet> RandomInstances() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<std::size_t> n(1, 200), s(2, 6);
  std::uniform_int_distribution<int> classes(2, 5);
  std::vector<AlignedRunSet> sets;
  for (int i = 0; i < 1000; ++i) {
    sets.push_back(testing::RandomClassification(rng, n(rng), s(rng), classes(rng)));
  }
  return sets;
}

Outcome OracleEquivalence(const std::vector<AlignedRunSet>& sets) {
  Outcome o;
  double worst = 0.0;
  for (const AlignedRunSet& set : sets) {
    const StabilityReport r =
        AggregateStability(set, MetricKind::kAccuracy, IndicatorScorer());
    const testing::OracleReport ref = testing::BruteForce(set);
    auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
    for (const auto& [seed, acc] : ref.acc) track(r.zeta_per_seed.at(seed), acc);
    track(r.zeta_mean, ref.acc_mean);
    track(r.var, ref.var_fraction);
    track(100.0 * r.var, ref.var_percent);
    o.Require(r.pairs.size() == ref.pairs.size(), "pair count differs");
    for (const auto& p : r.pairs) {
      const auto& [con, ccon] = ref.pairs.at({p.seed_a, p.seed_b});
      track(p.con, con);
      track(p.ccon, ccon);
    }
    track(r.con_mean, ref.con_mean);
    track(r.ccon_mean, ref.ccon_mean);
  }
  o.Require(worst <= 1e-12, fmt::format("max abs diff {:.3e}", worst));
  if (o.pass) o.detail = fmt::format("{} instances, max abs diff {:.3e}", sets.size(), worst);
  return o;
}

Outcome Sandwich(const std::vector<AlignedRunSet>& sets) {
  Outcome o;
  std::size_t violations = 0, checked = 0;
  for (const AlignedRunSet& set : sets) {
    const StabilityReport r =
        AggregateStability(set, MetricKind::kAccuracy, IndicatorScorer());
    for (const auto& p : r.pairs) {
      const double a = r.zeta_per_seed.at(p.seed_a);
      const double b = r.zeta_per_seed.at(p.seed_b);
      ++checked;
      if (p.ccon < std::max(0.0, a + b - 1.0) - 1e-12) ++violations;
      if (p.ccon > std::min({p.con, a, b}) + 1e-12) ++violations;
    }
    if (r.ccon_mean > r.zeta_mean + 1e-12) ++violations;
  }
  o.Require(violations == 0, fmt::format("{} violations", violations));
  const CliResult v = Cli(
      {"validate", (testing::BundledDataDir() / "accuracy_cells.json").string()});
  o.Require(v.code == 0 && v.out == "OK\n", "validate on table cells: " + v.out + v.err);
  if (o.pass) o.detail = fmt::format("{} pairs, 0 violations; table cells OK", checked);
  return o;
}

Outcome TwoRunConstruction() {
  Outcome o;
  const auto start = Clock::now();
  const CliResult r = Cli(
      {"eval", "--manifest", (testing::TestDataDir() / "two_runs" / "manifest.json").string()});
  const double secs = Seconds(start);
  o.Require(r.code == 0, r.err);
  o.Require(r.out == "two_runs 60.00 0.00 20.00 20.00\n", "summary: " + r.out);
  o.Require(secs < 1.0, fmt::format("took {:.3f}s", secs));
  if (o.pass) o.detail = fmt::format("acc 60.00/60.00, CON 20.00, CCON 20.00 in {:.3f}s", secs);
  return o;
}

Outcome ScaleLaw() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 20);
  double worst_direct = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> frac(len(rng));
    for (double& v : frac) v = unit(rng);
    std::vector<double> pct;
    for (double v : frac) pct.push_back(100.0 * v);
    o.Require(Var(frac, Scale::kPercent) == 100.0 * Var(frac, Scale::kFraction),
              "percent scale not exactly 100x");
    worst_direct = std::max(worst_direct, std::abs(Var(pct) - 100.0 * Var(frac)));

    const std::vector<double> constant(frac.size(), frac.front());
    o.Require(Var(constant) == 0.0 && Var(constant, Scale::kPercent) == 0.0,
              "constant series has nonzero var");
  }
  o.Require(worst_direct <= 1e-12, fmt::format("direct percent diff {:.3e}", worst_direct));
  if (o.pass) {
    o.detail = fmt::format("100 series exact; direct percent input within {:.1e}",
                           worst_direct);
  }
  return o;
}

std::vector<double> ParseCorrelations(const std::string& out) {
  std::vector<double> r;
  std::istringstream in(out);
  std::string name;
  double v;
  while (in >> name >> v) r.push_back(v);
  return r;
}

Outcome Correlations() {
  Outcome o;
  const double expected[] = {-0.3918, 0.4257, 0.4259};
  const std::string table = (testing::BundledDataDir() / "roberta_summary.json").string();
  const std::string sizes = (testing::BundledDataDir() / "train_sizes.json").string();
  std::string log;
  for (const std::string transform : {"log10", "raw"}) {
    const CliResult r =
        Cli({"correlate", table, "--sizes", sizes, "--transform", transform});
    const std::vector<double> got = ParseCorrelations(r.out);
    bool ok = r.code == 0 && got.size() == 3;
    for (std::size_t i = 0; ok && i < 3; ++i) {
      ok = std::abs(got[i] - expected[i]) <= 0.05;
    }
    log += fmt::format("{}{}=[{}] {}", log.empty() ? "" : "; ", transform,
                       fmt::join(got, ", "), ok ? "within 0.05" : "outside 0.05");
    if (ok) {
      o.detail = "passing transform " + transform + " (" + log + ")";
      return o;
    }
  }
  o.Require(false, log);
  return o;
}

std::vector<Output> Labels(const std::vector<std::string>& v) {
  std::vector<Output> out;
  for (const auto& s : v) out.push_back(Label{s});
  return out;
}

Outcome MetricKernels() {
  Outcome o;
  const auto start = Clock::now();
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };

  // Worked examples.
  o.Require(Accuracy(Labels({"1", "0", "1"}), Labels({"1", "1", "1"})) == 2.0 / 3.0,
            "accuracy 2/3");
  o.Require(Accuracy(Labels({"a", "a", "a", "a", "a"}), Labels({"b", "b", "b", "b", "b"})) == 0,
            "accuracy disjoint");
  const auto prf = ComputePrecisionRecallF1(Labels({"1", "1", "0"}), Labels({"1", "0", "1"}),
                                            Averaging::Binary("1"));
  o.Require(prf.precision == 0.5 && prf.recall == 0.5 && prf.f1 == 0.5, "binary prf");
  const auto none = ComputePrecisionRecallF1(Labels({"0", "0"}), Labels({"1", "0"}),
                                             Averaging::Binary("1"));
  o.Require(none.precision == 0.0 && none.f1 == 0.0, "zero predicted positives");
  o.Require(Mcc(Labels({"1", "1", "0", "0"}), Labels({"1", "0", "1", "0"})) == 0.0,
            "mcc balanced");
  o.Require(Mcc(Labels({"1", "0", "1"}), Labels({"1", "0", "1"})) == 1.0, "mcc perfect");
  o.Require(Mcc(Labels({"1", "1", "1"}), Labels({"1", "0", "1"})) == 0.0, "mcc constant");
  const std::vector<double> p2{2, 4}, g2{3, 3}, p1{5}, g1{2};
  o.Require(Mae(p2, g2) == 1.0 && Mse(p2, g2) == 1.0, "mae/mse pair");
  o.Require(Mae(p1, g1) == 3.0 && Mse(p1, g1) == 9.0, "mae/mse single");
  const std::vector<double> x3{1, 2, 3}, y3{1, 3, 2}, z3{2, 1, 3};
  o.Require(near(Pearson(x3, y3), 0.5), "pearson 0.5");
  o.Require(near(Spearman(x3, z3), 0.5), "spearman 0.5");
  o.Require(ExactMatch("a b", "b c") == 0.0 && TokenF1("a b", "b c") == 0.5, "text a b / b c");
  o.Require(ExactMatch("", "x") == 0.0 && TokenF1("", "x") == 0.0, "text empty");
  o.Require(ExactMatch("a b c", "a b c") == 1.0 && TokenF1("a b c", "a b c") == 1.0,
            "text identity");

  // Property inputs.
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> len(2, 30), cls(0, 3), bin(0, 1);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 10000 && o.pass; ++trial) {
    const int n = len(rng);
    std::vector<Output> p, g, pb, gb, flipped;
    std::vector<double> xs, ys, xa;
    const double a = scale(rng), b = gauss(rng);
    for (int i = 0; i < n; ++i) {
      p.push_back(Label{std::to_string(cls(rng))});
      g.push_back(Label{std::to_string(cls(rng))});
      const int bp = bin(rng);
      pb.push_back(Label{std::to_string(bp)});
      flipped.push_back(Label{std::to_string(1 - bp)});
      gb.push_back(Label{std::to_string(bin(rng))});
      xs.push_back(gauss(rng));
      ys.push_back(gauss(rng));
      xa.push_back(a * xs.back() + b);
    }
    const double acc = Accuracy(p, g);
    o.Require(acc >= 0 && acc <= 1 && acc == Accuracy(g, p), "accuracy range/symmetry");
    const auto macro = ComputePrecisionRecallF1(p, g, Averaging::Macro());
    o.Require(macro.f1 >= 0 && macro.f1 <= 1, "f1 range");
    const double m = Mcc(pb, gb);
    o.Require(m >= -1 - 1e-12 && m <= 1 + 1e-12, "mcc range");
    o.Require(near(Mcc(flipped, gb), -m), "mcc flip antisymmetry");
    o.Require(Mae(xs, ys) >= 0 && Mae(xs, ys) == Mae(ys, xs), "mae symmetry");
    o.Require(Mse(xs, ys) >= 0, "mse range");
    const double r = Pearson(xs, ys);
    o.Require(r >= -1 - 1e-12 && r <= 1 + 1e-12, "pearson range");
    o.Require(near(r, Pearson(ys, xs)), "pearson symmetry");
    o.Require(near(r, Pearson(xa, ys)), "pearson affine invariance");
    const double rho = Spearman(xs, ys);
    o.Require(rho >= -1 - 1e-12 && rho <= 1 + 1e-12, "spearman range");
  }
  const double secs = Seconds(start);
  o.Require(secs < 30.0, fmt::format("took {:.2f}s", secs));
  if (o.pass) o.detail = fmt::format("examples exact, 10000 property inputs in {:.2f}s", secs);
  return o;
}

Outcome Determinism() {
  Outcome o;
  const fs::path dir = Scratch("determinism");
  constexpr int kSeeds = 10;
  constexpr int kExamples = 100000;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> label(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> gold(kExamples);
  {
    std::ofstream out(dir / "gold.jsonl", std::ios::binary);
    for (int i = 0; i < kExamples; ++i) {
      gold[i] = label(rng);
      out << "{\"id\":\"" << testing::Id(i) << "\",\"output\":" << gold[i] << "}\n";
    }
  }
  std::string manifest =
      R"({"task":"synthetic","task_kind":"classification","metric":"accuracy",)"
      R"("scorer":"indicator","gold_path":"gold.jsonl","runs":[)";
  for (int k = 0; k < kSeeds; ++k) {
    const std::string name = fmt::format("seed{}.jsonl", k);
    std::ofstream out(dir / name, std::ios::binary);
    const double keep = 0.6 + 0.03 * k;
    for (int i = kExamples - 1; i >= 0; --i) {
      const int v = unit(rng) < keep ? gold[i] : label(rng);
      out << "{\"id\":\"" << testing::Id(i) << "\",\"output\":" << v << "}\n";
    }
    manifest += fmt::format(R"({}{{"seed":{},"path":"{}"}})", k ? "," : "", 1000 + k, name);
  }
  manifest += "]}";
  std::ofstream(dir / "manifest.json") << manifest;

  const auto start = Clock::now();
  const std::string m = (dir / "manifest.json").string();
  const CliResult a = Cli({"eval", "--manifest", m, "--out", (dir / "a.json").string()});
  const CliResult b = Cli({"eval", "--manifest", m, "--out", (dir / "b.json").string()});
  const double secs = Seconds(start);
  o.Require(a.code == 0 && b.code == 0, a.err + b.err);
  const std::string ja = Slurp(dir / "a.json");
  o.Require(!ja.empty() && ja == Slurp(dir / "b.json"), "reports differ");
  o.Require(a.out == b.out, "summaries differ");
  o.Require(secs < 10.0, fmt::format("two evals took {:.2f}s", secs));
  if (o.pass) {
    o.detail = fmt::format("10 seeds x 100000 examples, identical {} byte reports, {:.2f}s",
                           ja.size(), secs);
  }
  fs::remove_all(dir);
  return o;
}

Outcome Malformed() {
  Outcome o;
  const fs::path dir = testing::TestDataDir() / "malformed";
  const fs::path out_dir = Scratch("malformed");
  const std::vector<std::pair<std::string, ErrorCode>> cases = {
      {"dup_id", ErrorCode::kDuplicateId},
      {"nan_scalar", ErrorCode::kParseError},
      {"missing_id", ErrorCode::kMissingId},
      {"extra_id", ErrorCode::kUnknownId},
      {"dup_seed", ErrorCode::kDuplicateSeed},
      {"unknown_field", ErrorCode::kSchemaError},
      {"missing_gold_file", ErrorCode::kIoError},
      {"bleu_scorer", ErrorCode::kSchemaError},
  };
  for (const auto& [name, code] : cases) {
    const fs::path report = out_dir / (name + ".json");
    const CliResult r = Cli({"eval", "--manifest", (dir / (name + ".json")).string(),
                             "--out", report.string()});
    const std::string want = std::string(ErrorCodeName(code)) + "(";
    o.Require(r.code != 0, name + ": exit 0");
    o.Require(r.err.find(want) != std::string::npos, name + ": " + r.err);
    o.Require(!fs::exists(report), name + ": report written");
  }
  if (o.pass) o.detail = fmt::format("{} fixtures rejected with named errors", cases.size());
  fs::remove_all(out_dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<AlignedRunSet> sets = RandomInstances();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", [&] { return OracleEquivalence(sets); }},
      {"sandwich invariants", [&] { return Sandwich(sets); }},
      {"two-run construction", TwoRunConstruction},
      {"variance scale law", ScaleLaw},
      {"size correlations", Correlations},
      {"metric kernels", MetricKernels},
      {"determinism", Determinism},
      {"ingestion robustness", Malformed},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
