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


// Command-line front end for the ldprank experiment harness.
//
//   ldprank simulate|attack|defend|hh|sweep|oracle [flags]
//
// Every flag may also be set in a declarative file passed with --config
// (key = value, keys named like the long flags); command-line flags win.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI/CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "ldprank/attacks.h"
#include "ldprank/data.h"
#include "ldprank/defenses.h"
#include "ldprank/harness.h"
#include "ldprank/protocols.h"

namespace ldprank {
namespace {

struct Flags {
  std::string dataset = "zipf";
  int d = 100;
  int64_t n = 100000;
  double zipf_exponent = 1.0;
  std::string csv_path;
  std::string column;
  int max_domain = 0;
  std::string protocol;  // Empty: olh in heavy-hitter mode, krr otherwise.
  std::string attack = "oia";
  std::string direction = "lower";
  double beta = 0.05;
  double epsilon = 0;  // 0: protocol default.
  std::string targets = "random:10";
  double confidence = 0.9;
  double rho = 1.0;
  double epsilon_prime = 0;  // 0: equal to epsilon.
  std::string defense;       // Empty: per-command default.
  int g = 10;
  int k = 20;
  int gamma = 0;  // 0: ceil(log2 d).
  int trials = 20;
  uint64_t seed = 1;
  std::string out = "out";
  int threads = 0;
  bool no_timing = false;
  std::vector<std::string> sweep;
  std::string mode = "ranking";
  std::string figure;
  int num_seeds = 100;
  int detect_min_support = 3;
  int64_t detect_threshold = 20;
  bool dump_plan = false;
  int instances = 50;
};

absl::StatusOr<ExperimentConfig> ToConfig(const Flags& f,
                                          absl::string_view command) {
  ExperimentConfig config;
  config.dataset.kind = f.dataset;
  config.dataset.d = f.d;
  config.dataset.n = f.n;
  config.dataset.zipf_exponent = f.zipf_exponent;
  config.dataset.csv_path = f.csv_path;
  config.dataset.column = f.column;
  if (f.max_domain > 0) config.dataset.max_domain = f.max_domain;
  const bool heavy_hitter = command == "hh" || (command == "sweep" && f.mode == "hh");
  absl::StatusOr<Protocol> protocol = ParseProtocol(
      !f.protocol.empty() ? f.protocol : (heavy_hitter ? "olh" : "krr"));
  if (!protocol.ok()) return protocol.status();
  config.protocol = *protocol;
  if (command == "simulate") {
    config.attack.reset();
  } else {
    absl::StatusOr<AttackStrategy> attack = ParseAttack(f.attack);
    if (!attack.ok()) return attack.status();
    config.attack = *attack;
  }
  if (absl::Status s = ApplyAxisValue("direction", f.direction, config); !s.ok()) {
    return s;
  }
  std::string defense = f.defense;
  if (defense.empty()) defense = command == "defend" ? "ldprecover" : "none";
  if (absl::Status s = ApplyAxisValue("defense", defense, config); !s.ok()) {
    return s;
  }
  config.beta = f.beta;
  if (f.epsilon > 0) config.epsilon = f.epsilon;
  if (f.epsilon_prime > 0) config.epsilon_prime = f.epsilon_prime;
  absl::StatusOr<TargetSelection> targets = ParseTargets(f.targets);
  if (!targets.ok()) return targets.status();
  config.targets = *targets;
  config.confidence = f.confidence;
  config.rho = f.rho;
  config.g = f.g;
  config.k = f.k;
  if (f.gamma > 0) config.gamma = f.gamma;
  config.trials = f.trials;
  config.seed = f.seed;
  config.num_candidate_seeds = f.num_seeds;
  config.detection.min_support_size = f.detect_min_support;
  config.detection.count_threshold = f.detect_threshold;
  if (heavy_hitter) {
    config.mode = Mode::kHeavyHitter;
  } else if (f.mode != "ranking" && f.mode != "hh") {
    return absl::InvalidArgumentError(absl::StrCat("unknown mode: ", f.mode));
  }
  return config;
}

std::string DescribeReport(const Report& report) {
  if (const auto* krr = std::get_if<KrrReport>(&report)) {
    return absl::StrCat(krr->item);
  }
  if (const auto* oue = std::get_if<OueReport>(&report)) {
    std::vector<int> ones;
    for (size_t v = 0; v < oue->bits.size(); ++v) {
      if (oue->bits[v]) ones.push_back(static_cast<int>(v));
    }
    return absl::StrJoin(ones, " ");
  }
  const auto& olh = std::get<OlhReport>(report);
  return absl::StrCat(olh.seed, " ", olh.hash_value);
}

// Fake reports of one trial: kRR item, OUE one-bit positions, or OLH
// "seed hash".
absl::Status DumpPlan(const std::string& path, const AttackPlan& plan) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << "index,report\n";
  for (size_t i = 0; i < plan.reports.size(); ++i) {
    out << i << "," << DescribeReport(plan.reports[i]) << "\n";
  }
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("write failed: ", path));
}

void PrintSummary(std::span<const ResultRow> rows) {
  for (const PlotRow& p : SummarizeCells(rows, "none")) {
    std::cout << absl::StrFormat(
        "%s %s attack=%s defense=%s trials=%d gain=%.3f+-%.3f sr=%.3f+-%.3f\n",
        p.dataset, p.protocol, p.attack, p.defense, p.n_trials, p.gain_mean,
        p.gain_std, p.sr_mean, p.sr_std);
  }
}

absl::Status RunSimulate(const ExperimentConfig& config, const Dataset& dataset,
                         const Flags& f) {
  std::vector<double> sum(dataset.d(), 0), sum_sq(dataset.d(), 0);
  for (int t = 0; t < config.trials; ++t) {
    TrialArtifacts artifacts;
    absl::StatusOr<ResultRow> row =
        RunTrial(config, dataset, t, !f.no_timing, &artifacts);
    if (!row.ok()) return row.status();
    for (int v = 0; v < dataset.d(); ++v) {
      sum[v] += artifacts.before[v];
      sum_sq[v] += artifacts.before[v] * artifacts.before[v];
    }
  }
  const std::string path = (std::filesystem::path(f.out) / "estimates.csv").string();
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << "item_id,count,estimate_mean,estimate_std\n";
  double abs_err = 0;
  const double trials = config.trials;
  for (int v = 0; v < dataset.d(); ++v) {
    const double mean = sum[v] / trials;
    const double var =
        trials > 1 ? std::max(0.0, (sum_sq[v] - trials * mean * mean) / (trials - 1))
                   : 0.0;
    out << v << "," << dataset.counts()[v] << ","
        << absl::StrFormat("%.6f,%.6f", mean, std::sqrt(var)) << "\n";
    abs_err += std::abs(mean - dataset.counts()[v]);
  }
  std::cout << absl::StrFormat("wrote %s; mean |estimate - count| = %.3f\n", path,
                               abs_err / dataset.d());
  return absl::OkStatus();
}

absl::Status Run(const std::string& command, const Flags& f) {
  if (command == "oracle") {
    absl::StatusOr<OracleSummary> summary = RunOracleChecks(f.instances, f.seed);
    if (!summary.ok()) return summary.status();
    std::cout << absl::StrFormat(
        "instances=%d exact_allocation_optimal=%d oia_optimal=%d\n",
        summary->instances, summary->exact_matches, summary->oia_optimal);
    return absl::OkStatus();
  }
  absl::StatusOr<ExperimentConfig> config = ToConfig(f, command);
  if (!config.ok()) return config.status();
  if (absl::Status s = ValidateConfig(*config); !s.ok()) return s;
  absl::StatusOr<Dataset> dataset = BuildDataset(config->dataset, config->seed);
  if (!dataset.ok()) return dataset.status();
  std::error_code ec;
  std::filesystem::create_directories(f.out, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create output directory ", f.out));
  }
  if (absl::Status s = WriteItemsCsv(
          *dataset, (std::filesystem::path(f.out) / "items.csv").string());
      !s.ok()) {
    return s;
  }
  if (command == "simulate") return RunSimulate(*config, *dataset, f);

  std::vector<SweepAxis> axes;
  if (command == "sweep") {
    for (const std::string& text : f.sweep) {
      absl::StatusOr<SweepAxis> axis = ParseSweepAxis(text);
      if (!axis.ok()) return axis.status();
      axes.push_back(*std::move(axis));
    }
  } else if (command == "defend") {
    // Undefended baseline next to the requested pipeline.
    axes.push_back(
        {"defense", {"none", FormatDefensePipeline(config->defenses)}});
  }
  absl::StatusOr<std::vector<ExperimentConfig>> cells = ExpandSweep(*config, axes);
  if (!cells.ok()) return cells.status();
  RunOptions options;
  options.threads = f.threads;
  options.timing = !f.no_timing;
  absl::StatusOr<std::vector<ResultRow>> rows = RunCells(*cells, *dataset, options);
  if (!rows.ok()) return rows.status();

  const std::filesystem::path out_dir(f.out);
  if (absl::Status s = WriteResultsCsv((out_dir / "results.csv").string(), *rows);
      !s.ok()) {
    return s;
  }
  ManifestInfo info;
  info.figure = f.figure;
  info.command = command;
  info.axes = axes;
  info.num_cells = static_cast<int>(cells->size());
  info.timing = options.timing;
  if (absl::Status s = WriteManifest((out_dir / "manifest.json").string(),
                                     *config, info);
      !s.ok()) {
    return s;
  }
  absl::StatusOr<std::vector<std::string>> plots =
      EmitPlotdata(out_dir.string(), *rows, axes);
  if (!plots.ok()) return plots.status();
  if (f.dump_plan && config->mode == Mode::kRanking) {
    TrialArtifacts artifacts;
    absl::StatusOr<ResultRow> row =
        RunTrial(cells->front(), *dataset, 0, false, &artifacts);
    if (!row.ok()) return row.status();
    if (absl::Status s = DumpPlan((out_dir / "plan.csv").string(), artifacts.plan);
        !s.ok()) {
      return s;
    }
  }
  int failed_audits = 0;
  for (const ResultRow& row : *rows) failed_audits += !row.audit.ok;
  PrintSummary(*rows);
  std::cout << absl::StrFormat("rows=%d cells=%d failed_audits=%d out=%s\n",
                               rows->size(), cells->size(), failed_audits,
                               out_dir.string());
  return absl::OkStatus();
}

}  // namespace
}  // namespace ldprank

int main(int argc, char** argv) {
  ldprank::Flags f;
  CLI::App app{"LDP frequency-estimation poisoning experiments"};
  app.set_config("--config", "", "Declarative key = value file mirroring the flags");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--dataset", f.dataset, "zipf or csv")
      ->check(CLI::IsMember({"zipf", "csv"}));
  app.add_option("--d", f.d, "Domain size of the synthetic dataset");
  app.add_option("--n", f.n, "Genuine users of the synthetic dataset");
  app.add_option("--zipf-exponent", f.zipf_exponent, "Zipf exponent");
  app.add_option("--csv-path", f.csv_path, "Input CSV file");
  app.add_option("--column", f.column, "CSV column holding the item");
  app.add_option("--max-domain", f.max_domain, "Keep the most frequent values");
  app.add_option("--protocol", f.protocol,
                 "krr, oue or olh (default krr; olh for hh)")
      ->check(CLI::IsMember({"krr", "oue", "olh"}));
  app.add_option("--attack", f.attack, "ria, roa, oia, mpoia, rk or nf")
      ->check(CLI::IsMember({"ria", "roa", "oia", "mpoia", "rk", "nf"}));
  app.add_option("--direction", f.direction, "lower or elevate")
      ->check(CLI::IsMember({"lower", "elevate"}));
  app.add_option("--beta", f.beta, "Fake-user fraction m/(n+m)");
  app.add_option("--epsilon", f.epsilon, "Privacy budget (default by protocol)");
  app.add_option("--targets", f.targets, "random:R, top:R or list:a,b,...");
  app.add_option("--confidence", f.confidence, "MPOIA confidence level");
  app.add_option("--rho", f.rho, "NF sampling rate");
  app.add_option("--epsilon-prime", f.epsilon_prime, "NF knowledge budget");
  app.add_option("--defense", f.defense,
                 "none, normalize, detect, ldprecover, ldprecover-star; "
                 "join with + for a pipeline");
  app.add_option("--g", f.g, "PEM groups");
  app.add_option("--k", f.k, "Top-k size");
  app.add_option("--gamma", f.gamma, "PEM bits per item (default ceil(log2 d))");
  app.add_option("--trials", f.trials, "Trials per cell");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--threads", f.threads, "Worker threads (0: all cores)");
  app.add_flag("--no-timing", f.no_timing, "Write ms = 0 for byte-stable output");
  app.add_option("--sweep", f.sweep, "Axis name=v1,v2 or name=start:stop:step");
  app.add_option("--mode", f.mode, "sweep mode: ranking or hh")
      ->check(CLI::IsMember({"ranking", "hh"}));
  app.add_option("--figure", f.figure, "Preset identifier recorded in the manifest");
  app.add_option("--num-seeds", f.num_seeds, "OLH candidate seeds per attack");
  app.add_option("--detect-min-support", f.detect_min_support,
                 "Detection: minimum itemset size");
  app.add_option("--detect-threshold", f.detect_threshold,
                 "Detection: group count threshold");
  app.add_flag("--dump-plan", f.dump_plan, "Write trial 0 fake reports to plan.csv");
  app.add_option("--instances", f.instances, "oracle: random tiny instances");

  std::string command;
  for (const char* name : {"simulate", "attack", "defend", "hh", "sweep", "oracle"}) {
    app.add_subcommand(name)->callback([&command, name] { command = name; });
  }
  app.get_subcommand("simulate")->description("Genuine reports only; estimate accuracy");
  app.get_subcommand("attack")->description("Poisoning attack, no defense by default");
  app.get_subcommand("defend")->description("Attack with and without a defense");
  app.get_subcommand("hh")->description("PEM heavy-hitter identification under attack");
  app.get_subcommand("sweep")->description("Cartesian parameter sweep");
  app.get_subcommand("oracle")->description("Brute-force optimality checks");

  CLI11_PARSE(app, argc, argv);
  const absl::Status status = ldprank::Run(command, f);
  if (!status.ok()) {
    std::cerr << "error: " << status << "\n";
    return 1;
  }
  return 0;
}
