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

// Experiment orchestration: seeded Monte-Carlo trials, Cartesian sweeps,
// results CSV, manifest and plot-ready summaries.
//
// Every trial draws its randomness from streams derived from
// (master seed, trial, purpose), so a row depends only on its own cell
// configuration and trial index, never on scheduling.

#ifndef LDPRANK_HARNESS_H_
#define LDPRANK_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldprank/attack_plan.h"
#include "ldprank/attacks.h"
#include "ldprank/data.h"
#include "ldprank/defenses.h"
#include "ldprank/protocols.h"
#include "ldprank/ranking.h"
#include "ldprank/rng.h"

namespace ldprank {

struct DatasetSpec {
  std::string kind = "zipf";  // "zipf" or "csv".
  int d = 100;
  int64_t n = 100000;
  double zipf_exponent = 1.0;
  std::string csv_path;
  std::string column;
  std::optional<int> max_domain;
};

// Short name used in result rows: "zipf" or the CSV file stem.
std::string DatasetName(const DatasetSpec& spec);

// Synthetic datasets draw from DeriveSeed(master_seed, {kDatasetStream}).
absl::StatusOr<Dataset> BuildDataset(const DatasetSpec& spec,
                                     uint64_t master_seed);

struct TargetSelection {
  enum class Kind { kRandom, kTop, kList };
  Kind kind = Kind::kRandom;
  int r = 10;
  std::vector<int> items;  // kList only.
};

// "random:R", "top:R" or "list:a,b,c".
absl::StatusOr<TargetSelection> ParseTargets(absl::string_view text);
std::string FormatTargets(const TargetSelection& selection);

// "none", or defense names joined by '+', e.g. "detect+ldprecover".
absl::StatusOr<std::vector<Defense>> ParseDefensePipeline(absl::string_view text);
std::string FormatDefensePipeline(std::span<const Defense> pipeline);

// Which report stream the harness builds.
enum class Mode { kRanking, kHeavyHitter };

struct ExperimentConfig {
  Mode mode = Mode::kRanking;
  DatasetSpec dataset;
  Protocol protocol = Protocol::kKrr;
  std::optional<AttackStrategy> attack = AttackStrategy::kOia;  // None: no attack.
  // Applied in order. Detection filters reports before aggregation; the
  // others post-process the estimate. Empty: undefended.
  std::vector<Defense> defenses;
  Direction direction = Direction::kLower;
  double beta = 0.05;
  std::optional<double> epsilon;  // Unset: protocol/direction default.
  TargetSelection targets;
  double confidence = 0.9;
  double rho = 1.0;
  std::optional<double> epsilon_prime;  // Unset: equals epsilon.
  int g = 10;
  int k = 20;
  std::optional<int> gamma;
  int trials = 20;
  uint64_t seed = 1;
  int num_candidate_seeds = 100;
  DetectionConfig detection;
};

// 1 by default; 3 for OUE lowering and 4.5 for kRR elevation.
double EffectiveEpsilon(const ExperimentConfig& config);
double EffectiveEpsilonPrime(const ExperimentConfig& config);

// m = round(beta n / (1 - beta)), so that m / (n + m) = beta.
int64_t FakeUsersFor(double beta, int64_t n);

// Range checks: trials >= 1, beta in [0, 0.1], epsilon in [0.5, 6],
// r in [1, 20], confidence in [0.5, 0.99], rho in (0, 1]. Heavy-hitter mode
// requires olh and one of ria, roa, oia.
absl::Status ValidateConfig(const ExperimentConfig& config);

struct ResultRow {
  std::string dataset;
  std::string protocol;
  std::string attack;
  std::string defense;
  std::string direction;
  double beta = 0;
  double epsilon = 0;
  int r = 0;
  double rho = 0;
  double eps_prime = 0;
  double confidence = 0;
  int g = 0;
  int k = 0;
  int trial = 0;
  uint64_t seed = 0;
  // Ranking mode: overall gain. Heavy-hitter mode: NaN.
  double gain = 0;
  // Heavy-hitter mode: success rate. Ranking mode: NaN.
  double sr = 0;
  double ms = 0;
  // Not serialized.
  AuditResult audit;
  int64_t fake_users = 0;
  int64_t flagged = 0;
};

struct TrialArtifacts {
  AttackPlan plan;
  std::vector<double> before;
  std::vector<double> after;
  std::vector<int> targets;
};

// Runs one trial. `artifacts` may be null.
absl::StatusOr<ResultRow> RunTrial(const ExperimentConfig& config,
                                   const Dataset& dataset, int trial,
                                   bool timing = true,
                                   TrialArtifacts* artifacts = nullptr);

struct RunOptions {
  int threads = 0;  // 0: hardware concurrency.
  bool timing = true;
};

// All trials of one cell, in trial order.
absl::StatusOr<std::vector<ResultRow>> RunCell(const ExperimentConfig& config,
                                               const Dataset& dataset,
                                               const RunOptions& options = {});

// All (cell, trial) pairs on a shared pool. Rows come back grouped by cell,
// then trial, whatever the thread count.
absl::StatusOr<std::vector<ResultRow>> RunCells(
    std::span<const ExperimentConfig> cells, const Dataset& dataset,
    const RunOptions& options = {});

struct SweepAxis {
  std::string name;
  std::vector<std::string> values;
};

// "name=v1,v2,..." or "name=start:stop:step" (inclusive stop).
absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view text);

// Sets one swept field by name: beta, epsilon, r, rho, eps_prime, confidence,
// g, k, attack, defense, protocol, direction.
absl::Status ApplyAxisValue(absl::string_view name, absl::string_view value,
                            ExperimentConfig& config);

// Cartesian product in axis order, last axis fastest. No axes: {base}.
absl::StatusOr<std::vector<ExperimentConfig>> ExpandSweep(
    const ExperimentConfig& base, std::span<const SweepAxis> axes);

inline constexpr absl::string_view kResultsHeader =
    "dataset,protocol,attack,defense,direction,beta,epsilon,r,rho,eps_prime,"
    "confidence,g,k,trial,seed,gain,sr,ms";

std::string FormatResultRow(const ResultRow& row);
absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(const std::string& path);

// Creates `out_dir` if needed. Fails when it cannot be written.
absl::Status WriteResultsCsv(const std::string& path,
                             std::span<const ResultRow> rows);

struct ManifestInfo {
  std::string figure;  // Preset identifier; empty for ad-hoc runs.
  std::string command;
  std::vector<SweepAxis> axes;
  int num_cells = 0;
  bool timing = true;
};

absl::Status WriteManifest(const std::string& path,
                           const ExperimentConfig& base,
                           const ManifestInfo& info);

inline constexpr absl::string_view kPlotdataHeader =
    "dataset,protocol,axis,value,attack,defense,n_trials,gain_mean,gain_std,"
    "sr_mean,sr_std";

struct PlotRow {
  std::string dataset;
  std::string protocol;
  std::string axis;
  std::string value;
  std::string attack;
  std::string defense;
  int n_trials = 0;
  double gain_mean = 0;
  double gain_std = 0;
  double sr_mean = 0;
  double sr_std = 0;
};

// One row per cell: mean and sample standard deviation over its trials.
// `axis` names the column of ResultRow used as `value`; "none" gives an
// empty value. Rows keep first-appearance order of cells.
std::vector<PlotRow> SummarizeCells(std::span<const ResultRow> rows,
                                    absl::string_view axis);

// Writes plot_<dataset>_<protocol>_<axis>.csv per axis (or "none" without
// axes) into out_dir and returns the written paths.
absl::StatusOr<std::vector<std::string>> EmitPlotdata(
    const std::string& out_dir, std::span<const ResultRow> rows,
    std::span<const SweepAxis> axes);

// Random tiny kRR lowering instances: d in [4, 8], r in {1, 2}, m in [1, 6],
// counts uniform in [1, 100], epsilon uniform in [0.5, 3].
AttackContext RandomTinyInstance(Rng& rng);

struct OracleSummary {
  int instances = 0;
  // ExactValueAllocation gain equals the brute-force optimum.
  int exact_matches = 0;
  // OiaKrr gain is at least the brute-force optimum.
  int oia_optimal = 0;
};

// Compares ExactValueAllocation and OiaKrr with BruteForceOptimal by expected
// gain on `instances` random tiny instances.
absl::StatusOr<OracleSummary> RunOracleChecks(int instances, uint64_t seed);

}  // namespace ldprank

#endif  // LDPRANK_HARNESS_H_
