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

#include <gtest/gtest.h>

#include "seedstab/stability.h"
#include "test_util.h"

namespace seedstab {
namespace {

namespace fs = std::filesystem;

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

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("seedstab_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string WriteReport(const std::string& name, const StabilityReport& r) {
    std::ofstream(dir_ / name) << RenderReport(r, ReportFormat::kJson).body;
    return Path(name);
  }

  fs::path dir_;
};

StabilityReport SeedRow(std::string task, std::vector<double> zeta,
                        std::int64_t first_seed = 1) {
  StabilityReport r;
  r.task = std::move(task);
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    r.zeta_per_seed[first_seed + static_cast<std::int64_t>(i)] = zeta[i];
  }
  return r;
}

std::string Manifest(const std::string& dir) {
  return (testing::TestDataDir() / dir / "manifest.json").string();
}

TEST_F(CliTest, EvalTwoRunSummary) {
  const CliResult r = Cli({"eval", "--manifest", Manifest("two_runs")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "two_runs 60.00 0.00 20.00 20.00\n");
}

TEST_F(CliTest, EvalIdenticalRunsWritesEveryFormat) {
  for (const std::string fmt : {"json", "md", "csv"}) {
    const std::string out = Path("report." + fmt);
    const CliResult r =
        Cli({"eval", "--manifest", Manifest("identical"), "--out", out, "--format", fmt});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "identical 75.00 0.00 100.00 75.00\n");
    EXPECT_TRUE(fs::exists(out));
  }
  const StabilityReport rep = ParseReport(Slurp(Path("report.json")));
  EXPECT_EQ(rep.var, 0.0);
  EXPECT_EQ(rep.con_mean, 1.0);
  EXPECT_EQ(rep.train_size, 4);
  EXPECT_NE(Slurp(Path("report.md")).find("| identical | 75.00 (±0.00) | 100.00 (±0.00)"),
            std::string::npos);
}

TEST_F(CliTest, EvalIsByteDeterministic) {
  ASSERT_EQ(Cli({"eval", "--manifest", Manifest("two_runs"), "--out", Path("a.json")}).code, 0);
  ASSERT_EQ(Cli({"eval", "--manifest", Manifest("two_runs"), "--out", Path("b.json")}).code, 0);
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
}

TEST_F(CliTest, EvalFailuresWriteNothing) {
  const fs::path bad = testing::TestDataDir() / "malformed";
  for (const std::string name :
       {"dup_id", "missing_id", "extra_id", "dup_seed", "unknown_field", "nan_scalar",
        "missing_gold_file", "bleu_scorer"}) {
    const std::string out = Path(name + ".json");
    const CliResult r =
        Cli({"eval", "--manifest", (bad / (name + ".json")).string(), "--out", out});
    EXPECT_NE(r.code, 0) << name;
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << name << ": " << r.err;
    EXPECT_FALSE(fs::exists(out)) << name;
    EXPECT_TRUE(r.out.empty()) << name;
  }
  const CliResult missing = Cli({"eval", "--manifest",
                                 (bad / "missing_gold_file.json").string()});
  EXPECT_NE(missing.err.find("no_such_gold.jsonl"), std::string::npos) << missing.err;
  const CliResult dup = Cli({"eval", "--manifest", (bad / "dup_id.json").string()});
  EXPECT_NE(dup.err.find("DuplicateId"), std::string::npos) << dup.err;
}

TEST_F(CliTest, CorrelateConstructedLinearCase) {
  std::vector<std::string> args = {"correlate"};
  const std::vector<std::pair<std::string, double>> rows = {
      {"a", 3.0}, {"b", 2.0}, {"c", 1.0}};
  const double ccon[] = {0.4, 0.45, 0.6};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    StabilityReport r;
    r.task = rows[i].first;
    r.var = rows[i].second;
    r.con_mean = 0.5 + 0.1 * static_cast<double>(i);
    r.ccon_mean = ccon[i];
    args.push_back(WriteReport(r.task + ".json", r));
  }
  std::ofstream(Path("sizes.json")) << R"({"c": 1000, "a": 10, "b": 100})";
  args.insert(args.end(), {"--sizes", Path("sizes.json"), "--out", Path("rows.csv")});
  const CliResult r = Cli(args);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "r_var -1.0000");
  EXPECT_NE(r.out.find("r_con 1.0000"), std::string::npos);
  EXPECT_EQ(Slurp(Path("rows.csv")),
            "task,size,var,con,ccon\na,10,3,0.5,0.4\nb,100,2,0.6,0.45\nc,1000,1,0.7,0.6\n");
}

TEST_F(CliTest, CorrelateErrors) {
  StabilityReport r;
  r.task = "a";
  const std::string a = WriteReport("a.json", r);
  r.task = "b";
  const std::string b = WriteReport("b.json", r);
  std::ofstream(Path("sizes.json")) << R"({"a": 10, "b": 100})";
  CliResult res = Cli({"correlate", a, b, a, "--sizes", Path("sizes.json")});
  EXPECT_EQ(res.code, 1);
  EXPECT_NE(res.err.find("DuplicateTask"), std::string::npos) << res.err;
  res = Cli({"correlate", a, b, "--sizes", Path("sizes.json")});
  EXPECT_EQ(res.code, 1);
  EXPECT_NE(res.err.find("TooFewTasks"), std::string::npos) << res.err;
  r.task = "z";
  const std::string z = WriteReport("z.json", r);
  res = Cli({"correlate", a, b, z, "--sizes", Path("sizes.json")});
  EXPECT_NE(res.err.find("MissingSize"), std::string::npos) << res.err;
  res = Cli({"correlate", a, b, z, "--sizes", Path("sizes.json"), "--transform", "sqrt"});
  EXPECT_EQ(res.code, 2);
}

TEST_F(CliTest, CorrelateBundledTable) {
  const std::string sizes = (testing::BundledDataDir() / "train_sizes.json").string();
  const std::string table = (testing::BundledDataDir() / "roberta_summary.json").string();
  CliResult r = Cli({"correlate", table, "--sizes", sizes, "--transform", "raw"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "r_var -0.3558\nr_con 0.3842\nr_ccon 0.4061\n");
  r = Cli({"correlate", table, "--sizes", sizes});
  EXPECT_EQ(r.out, "r_var -0.4342\nr_con 0.4758\nr_ccon 0.4162\n");
}

TEST_F(CliTest, HeatmapRows) {
  const std::string a = WriteReport("a.json", SeedRow("a", {0.6, 0.7, 0.8}));
  const std::string b = WriteReport("b.json", SeedRow("b", {0.7, 0.7, 0.7}));
  const CliResult r = Cli({"heatmap", a, b, "--out", Path("h.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Slurp(Path("h.csv")),
            "task,1,2,3\na,0.0000,0.5000,1.0000\nb,0.5000,0.5000,0.5000\n");

  const std::string c = WriteReport("c.json", SeedRow("c", {0.6, 0.7, 0.8}, 2));
  const CliResult bad = Cli({"heatmap", a, c, "--out", Path("bad.csv")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("SeedSetMismatch"), std::string::npos) << bad.err;
  EXPECT_FALSE(fs::exists(Path("bad.csv")));
}

TEST_F(CliTest, ValidateOutcomes) {
  ASSERT_EQ(Cli({"eval", "--manifest", Manifest("two_runs"), "--out", Path("r.json")}).code, 0);
  CliResult r = Cli({"validate", Path("r.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "OK\n");

  StabilityReport forged = ParseReport(Slurp(Path("r.json")));
  forged.ccon_mean = forged.con_mean + 0.1;
  forged.pairs.clear();
  forged.zeta_per_seed.clear();
  r = Cli({"validate", WriteReport("forged.json", forged)});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1) << r.out;
  EXPECT_EQ(r.out.rfind("VIOLATION two_runs: ", 0), 0u) << r.out;

  r = Cli({"validate", (testing::BundledDataDir() / "accuracy_cells.json").string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out, "OK\n");

  std::ofstream(Path("junk.json")) << "{ not json";
  r = Cli({"validate", Path("junk.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({"eval"}).code, 2);
  EXPECT_EQ(Cli({"eval", "--manifest", "x", "--format", "xml"}).code, 2);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

}  // namespace
}  // namespace seedstab
