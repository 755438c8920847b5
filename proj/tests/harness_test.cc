// Copyright 2026 The ldprank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ldprank/harness.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldprank {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

std::string TempDir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / ("ldprank_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.dataset.d = 40;
  config.dataset.n = 20000;
  config.trials = 4;
  config.targets.r = 4;
  return config;
}

std::vector<std::string> Lines(const std::vector<ResultRow>& rows) {
  std::vector<std::string> lines;
  for (const ResultRow& row : rows) lines.push_back(FormatResultRow(row));
  return lines;
}

TEST(ConfigTest, FakeUsersMatchFraction) {
  EXPECT_EQ(FakeUsersFor(0.05, 100000), 5263);
  EXPECT_EQ(FakeUsersFor(0, 100000), 0);
  for (double beta : {0.01, 0.03, 0.07, 0.1}) {
    const int64_t m = FakeUsersFor(beta, 100000);
    EXPECT_NEAR(static_cast<double>(m) / (100000 + m), beta, 1e-5);
  }
}

TEST(ConfigTest, EffectiveEpsilonDefaults) {
  ExperimentConfig config;
  EXPECT_EQ(EffectiveEpsilon(config), 1.0);
  config.protocol = Protocol::kOue;
  EXPECT_EQ(EffectiveEpsilon(config), 3.0);
  config.protocol = Protocol::kKrr;
  config.direction = Direction::kElevate;
  EXPECT_EQ(EffectiveEpsilon(config), 4.5);
  config.epsilon = 2.0;
  EXPECT_EQ(EffectiveEpsilon(config), 2.0);
  EXPECT_EQ(EffectiveEpsilonPrime(config), 2.0);
  config.epsilon_prime = 0.5;
  EXPECT_EQ(EffectiveEpsilonPrime(config), 0.5);
}

TEST(ConfigTest, ValidationRanges) {
  EXPECT_TRUE(ValidateConfig(ExperimentConfig{}).ok());
  auto invalid = [](auto mutate) {
    ExperimentConfig config;
    mutate(config);
    return !ValidateConfig(config).ok();
  };
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.beta = 0.2; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.epsilon = 0.1; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.epsilon = 7; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.targets.r = 21; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.confidence = 0.995; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.rho = 0; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) { c.trials = 0; }));
  EXPECT_TRUE(invalid([](ExperimentConfig& c) {
    c.mode = Mode::kHeavyHitter;
    c.attack = AttackStrategy::kMpoia;
  }));
}

TEST(ParseTest, TargetsRoundTrip) {
  for (const char* text : {"random:10", "top:3", "list:4,7,9"}) {
    EXPECT_EQ(FormatTargets(*ParseTargets(text)), text);
  }
  EXPECT_THAT(ParseTargets("list:4,7,9")->items, ElementsAre(4, 7, 9));
  EXPECT_FALSE(ParseTargets("top").ok());
  EXPECT_FALSE(ParseTargets("best:3").ok());
  EXPECT_FALSE(ParseTargets("list:a").ok());
}

TEST(ParseTest, DefensePipeline) {
  EXPECT_TRUE(ParseDefensePipeline("none")->empty());
  EXPECT_THAT(*ParseDefensePipeline("detect+ldprecover"),
              ElementsAre(Defense::kDetect, Defense::kLdpRecover));
  EXPECT_EQ(FormatDefensePipeline(*ParseDefensePipeline("detect+ldprecover")),
            "detect+ldprecover");
  EXPECT_EQ(FormatDefensePipeline({}), "none");
  EXPECT_FALSE(ParseDefensePipeline("detect+moat").ok());
}

TEST(SweepTest, AxisCounts) {
  EXPECT_EQ(ParseSweepAxis("epsilon=0.5:6:0.5")->values.size(), 12u);
  EXPECT_EQ(ParseSweepAxis("r=1:20:1")->values.size(), 20u);
  EXPECT_THAT(ParseSweepAxis("attack=ria,roa,oia")->values,
              ElementsAre("ria", "roa", "oia"));
  EXPECT_FALSE(ParseSweepAxis("epsilon").ok());
  EXPECT_FALSE(ParseSweepAxis("epsilon=3:1:1").ok());
  EXPECT_THAT(ParseSweepAxis("targets=random:2,top:5")->values,
              ElementsAre("random:2", "top:5"));
  EXPECT_THAT(ParseSweepAxis("targets=random:2")->values,
              ElementsAre("random:2"));
  EXPECT_FALSE(ParseSweepAxis("epsilon=1:2:0").ok());
}

TEST(SweepTest, ExpansionIsCartesianLastAxisFastest) {
  const ExperimentConfig base;
  EXPECT_EQ(ExpandSweep(base, {})->size(), 1u);
  const std::vector<SweepAxis> axes = {*ParseSweepAxis("epsilon=0.5:6:0.5"),
                                       *ParseSweepAxis("attack=roa,oia")};
  const std::vector<ExperimentConfig> cells = *ExpandSweep(base, axes);
  ASSERT_EQ(cells.size(), 24u);
  EXPECT_EQ(*cells[0].epsilon, 0.5);
  EXPECT_EQ(*cells[0].attack, AttackStrategy::kRoa);
  EXPECT_EQ(*cells[1].epsilon, 0.5);
  EXPECT_EQ(*cells[1].attack, AttackStrategy::kOia);
  EXPECT_EQ(*cells[23].epsilon, 6.0);
}

TEST(SweepTest, ApplyAxisValueRejectsUnknownOrInvalid) {
  ExperimentConfig config;
  EXPECT_FALSE(ApplyAxisValue("color", "red", config).ok());
  EXPECT_FALSE(ApplyAxisValue("beta", "lots", config).ok());
  EXPECT_TRUE(ApplyAxisValue("defense", "normalize+ldprecover", config).ok());
  EXPECT_THAT(config.defenses,
              ElementsAre(Defense::kNormalize, Defense::kLdpRecover));
  // Out-of-range values surface when the sweep is validated.
  EXPECT_FALSE(ExpandSweep(config, {{*ParseSweepAxis("beta=0.5")}}).ok());
}

TEST(RunTest, SameSeedGivesIdenticalRowsAcrossThreadCounts) {
  ExperimentConfig config = SmallConfig();
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  std::vector<ExperimentConfig> cells;
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    config.protocol = protocol;
    config.num_candidate_seeds = 20;
    cells.push_back(config);
  }
  const std::vector<ResultRow> serial =
      *RunCells(cells, dataset, RunOptions{1, false});
  const std::vector<ResultRow> parallel =
      *RunCells(cells, dataset, RunOptions{4, false});
  ASSERT_EQ(serial.size(), 12u);
  EXPECT_EQ(Lines(serial), Lines(parallel));
  EXPECT_EQ(Lines(serial), Lines(*RunCells(cells, dataset, RunOptions{1, false})));
  for (const ResultRow& row : serial) EXPECT_EQ(row.ms, 0);
}

TEST(RunTest, RowDependsOnlyOnItsCellAndTrial) {
  ExperimentConfig config = SmallConfig();
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  const ResultRow alone = *RunTrial(config, dataset, 2, false);
  ExperimentConfig other = config;
  other.attack = AttackStrategy::kRia;
  const std::vector<ExperimentConfig> cells = {other, config};
  const std::vector<ResultRow> rows = *RunCells(cells, dataset, RunOptions{3, false});
  EXPECT_EQ(FormatResultRow(rows[4 + 2]), FormatResultRow(alone));
}

TEST(RunTest, ZeroBetaGivesZeroGain) {
  ExperimentConfig config = SmallConfig();
  config.beta = 0;
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  for (const ResultRow& row : *RunCell(config, dataset, RunOptions{0, false})) {
    EXPECT_EQ(row.gain, 0);
    EXPECT_EQ(row.fake_users, 0);
  }
}

TEST(RunTest, RowsCarryCellParametersAndPassAudit) {
  ExperimentConfig config = SmallConfig();
  config.protocol = Protocol::kOue;
  config.defenses = {Defense::kDetect, Defense::kLdpRecover};
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  const std::vector<ResultRow> rows = *RunCell(config, dataset);
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    const ResultRow& row = rows[i];
    EXPECT_EQ(row.trial, i);
    EXPECT_EQ(row.dataset, "zipf");
    EXPECT_EQ(row.protocol, "oue");
    EXPECT_EQ(row.attack, "oia");
    EXPECT_EQ(row.defense, "detect+ldprecover");
    EXPECT_EQ(row.direction, "lower");
    EXPECT_EQ(row.epsilon, 3.0);
    EXPECT_EQ(row.r, 4);
    EXPECT_TRUE(std::isnan(row.sr));
    EXPECT_GE(row.gain, 0);
    EXPECT_LE(row.gain, 4 * 36);
    EXPECT_TRUE(row.audit.ok);
    EXPECT_EQ(row.fake_users, FakeUsersFor(0.05, 20000));
  }
}

TEST(RunTest, ArtifactsExposePlanAndEstimates) {
  ExperimentConfig config = SmallConfig();
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  TrialArtifacts artifacts;
  const ResultRow row = *RunTrial(config, dataset, 0, false, &artifacts);
  EXPECT_EQ(static_cast<int64_t>(artifacts.plan.reports.size()), row.fake_users);
  EXPECT_EQ(artifacts.before.size(), 40u);
  EXPECT_EQ(artifacts.after.size(), 40u);
  EXPECT_EQ(artifacts.targets.size(), 4u);
  TargetSpec spec = *MakeTargetSpec(40, artifacts.targets, Direction::kLower);
  EXPECT_EQ(*OverallGain(Rank(artifacts.before), Rank(artifacts.after), spec),
            row.gain);
}

TEST(RunTest, NormalizeLeavesGainUnchanged) {
  ExperimentConfig config = SmallConfig();
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  ExperimentConfig normalized = config;
  normalized.defenses = {Defense::kNormalize};
  const std::vector<ResultRow> plain = *RunCell(config, dataset);
  const std::vector<ResultRow> defended = *RunCell(normalized, dataset);
  for (size_t i = 0; i < plain.size(); ++i) {
    EXPECT_EQ(plain[i].gain, defended[i].gain);
  }
}

TEST(RunTest, HeavyHitterModeReportsSuccessRate) {
  ExperimentConfig config;
  config.mode = Mode::kHeavyHitter;
  config.protocol = Protocol::kOlh;
  config.dataset.n = 20000;
  config.beta = 0.01;
  config.trials = 2;
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  for (const ResultRow& row : *RunCell(config, dataset)) {
    EXPECT_TRUE(std::isnan(row.gain));
    EXPECT_GE(row.sr, 0);
    EXPECT_LE(row.sr, 1);
    EXPECT_EQ(row.g, 10);
    EXPECT_EQ(row.k, 20);
  }
}

TEST(OutputTest, ResultsCsvRoundTrip) {
  ExperimentConfig config = SmallConfig();
  const Dataset dataset = *BuildDataset(config.dataset, config.seed);
  const std::vector<ResultRow> rows = *RunCell(config, dataset);
  const std::string path = TempDir("csv") + "/nested/results.csv";
  ASSERT_TRUE(WriteResultsCsv(path, rows).ok());
  const std::string text = ReadFile(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  const std::vector<ResultRow> parsed = *ParseResultsCsv(path);
  EXPECT_EQ(Lines(parsed), Lines(rows));
}

TEST(OutputTest, UnwritableOutputIsAnError) {
  const std::string dir = TempDir("blocked");
  std::filesystem::create_directories(dir);
  const std::string file = dir + "/plain_file";
  std::ofstream(file) << "x";
  EXPECT_EQ(WriteResultsCsv(file + "/results.csv", {}).code(),
            absl::StatusCode::kPermissionDenied);
  EXPECT_FALSE(WriteManifest(file + "/manifest.json", ExperimentConfig{}, {}).ok());
}

TEST(OutputTest, ManifestNamesFigureAndAxes) {
  const std::string path = TempDir("manifest") + "/manifest.json";
  ManifestInfo info;
  info.figure = "krr-epsilon";
  info.command = "sweep";
  info.axes = {*ParseSweepAxis("epsilon=1,2")};
  info.num_cells = 2;
  ASSERT_TRUE(WriteManifest(path, ExperimentConfig{}, info).ok());
  const std::string text = ReadFile(path);
  EXPECT_THAT(text, HasSubstr("\"figure\": \"krr-epsilon\""));
  EXPECT_THAT(text, HasSubstr("\"num_cells\": 2"));
  EXPECT_THAT(text, HasSubstr("\"num_rows\": 40"));
  EXPECT_THAT(text, HasSubstr("\"name\": \"epsilon\""));
}

ResultRow Row(const std::string& attack, double epsilon, int trial, double gain) {
  ResultRow row;
  row.dataset = "zipf";
  row.protocol = "krr";
  row.attack = attack;
  row.defense = "none";
  row.direction = "lower";
  row.epsilon = epsilon;
  row.trial = trial;
  row.gain = gain;
  row.sr = std::nan("");
  return row;
}

TEST(PlotdataTest, SingleCellGivesOneRowWithSampleStd) {
  const std::vector<ResultRow> rows = {Row("oia", 1, 0, 2), Row("oia", 1, 1, 4),
                                       Row("oia", 1, 2, 6)};
  const std::vector<PlotRow> summary = SummarizeCells(rows, "none");
  ASSERT_EQ(summary.size(), 1u);
  EXPECT_EQ(summary[0].n_trials, 3);
  EXPECT_DOUBLE_EQ(summary[0].gain_mean, 4);
  EXPECT_DOUBLE_EQ(summary[0].gain_std, 2);
  EXPECT_TRUE(std::isnan(summary[0].sr_mean));
  EXPECT_EQ(summary[0].value, "");
}

TEST(PlotdataTest, GroupingPreservesCellCountAndOrder) {
  std::vector<ResultRow> rows;
  for (double eps : {2.0, 1.0, 3.0}) {
    for (const char* attack : {"roa", "oia"}) {
      for (int t = 0; t < 3; ++t) rows.push_back(Row(attack, eps, t, eps * t));
    }
  }
  const std::vector<PlotRow> summary = SummarizeCells(rows, "epsilon");
  ASSERT_EQ(summary.size(), 6u);
  EXPECT_EQ(summary[0].value, "2");
  EXPECT_EQ(summary[0].attack, "roa");
  EXPECT_EQ(summary[1].attack, "oia");
  EXPECT_EQ(summary[2].value, "1");
  EXPECT_DOUBLE_EQ(summary[4].gain_mean, 3);
}

TEST(PlotdataTest, EmitWritesHeaderAndOneFilePerAxis) {
  std::vector<ResultRow> rows = {Row("oia", 1, 0, 2), Row("oia", 2, 0, 1)};
  const std::string dir = TempDir("plot");
  const std::vector<SweepAxis> axes = {*ParseSweepAxis("epsilon=1,2")};
  const std::vector<std::string> paths = *EmitPlotdata(dir, rows, axes);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(std::filesystem::path(paths[0]).filename(), "plot_zipf_krr_epsilon.csv");
  const std::string text = ReadFile(paths[0]);
  EXPECT_EQ(text.substr(0, text.find('\n')), kPlotdataHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  const std::vector<std::string> none = *EmitPlotdata(dir, rows, {});
  EXPECT_EQ(std::filesystem::path(none[0]).filename(), "plot_zipf_krr_none.csv");
}

TEST(OracleTest, TinyInstancesStayInRange) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const AttackContext ctx = RandomTinyInstance(rng);
    EXPECT_GE(ctx.spec.d, 4);
    EXPECT_LE(ctx.spec.d, 8);
    EXPECT_GE(ctx.spec.targets.size(), 1u);
    EXPECT_LE(ctx.spec.targets.size(), 2u);
    EXPECT_GE(ctx.m, 1);
    EXPECT_LE(ctx.m, 6);
    EXPECT_EQ(ctx.params.protocol, Protocol::kKrr);
  }
}

TEST(OracleTest, ExactAllocationMatchesBruteForce) {
  const OracleSummary summary = *RunOracleChecks(50, 7);
  EXPECT_EQ(summary.instances, 50);
  EXPECT_EQ(summary.exact_matches, 50);
  EXPECT_GE(summary.oia_optimal, 45);
}

}  // namespace
}  // namespace ldprank
