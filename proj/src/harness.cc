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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "ldprank/heavy_hitter.h"
#include "ldprank/rng.h"
#include "nlohmann/json.hpp"

namespace ldprank {
namespace {

// Stream purposes below a trial seed.
enum Stream : uint64_t {
  kDatasetStream = 1,
  kGenuineStream = 2,
  kTargetStream = 3,
  kKnowledgeStream = 4,
  kAttackStream = 5,
  kPemStream = 6,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

absl::StatusOr<double> ParseDouble(absl::string_view text) {
  double value = 0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(text), &value)) {
    return absl::InvalidArgumentError(absl::StrCat("not a number: ", text));
  }
  return value;
}

absl::StatusOr<int> ParseInt(absl::string_view text) {
  int value = 0;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(text), &value)) {
    return absl::InvalidArgumentError(absl::StrCat("not an integer: ", text));
  }
  return value;
}

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  return absl::StrFormat("%.10g", x);
}

absl::string_view DirectionName(Direction direction) {
  return direction == Direction::kLower ? "lower" : "elevate";
}

absl::StatusOr<Direction> ParseDirection(absl::string_view text) {
  const std::string lower = absl::AsciiStrToLower(text);
  if (lower == "lower") return Direction::kLower;
  if (lower == "elevate") return Direction::kElevate;
  return absl::InvalidArgumentError(absl::StrCat("unknown direction: ", text));
}

absl::StatusOr<std::vector<int>> SelectTargets(const TargetSelection& selection,
                                               const Dataset& dataset,
                                               Mode mode, int k, Rng& rng) {
  const int d = dataset.d();
  std::vector<double> truth(dataset.counts().begin(), dataset.counts().end());
  const Ranking ranking = Rank(truth);
  if (selection.kind == TargetSelection::Kind::kList) return selection.items;
  if (selection.kind == TargetSelection::Kind::kTop) {
    if (selection.r > d) return absl::InvalidArgumentError("r exceeds d");
    return std::vector<int>(ranking.order.begin(),
                            ranking.order.begin() + selection.r);
  }
  // Heavy-hitter targets come from the true top-k; ranking targets from the
  // whole domain.
  std::vector<int> pool;
  if (mode == Mode::kHeavyHitter) {
    pool.assign(ranking.order.begin(), ranking.order.begin() + std::min(k, d));
  } else {
    pool = ranking.order;
    std::sort(pool.begin(), pool.end());
  }
  if (selection.r > static_cast<int>(pool.size())) {
    return absl::InvalidArgumentError("r exceeds the target pool");
  }
  std::vector<int> chosen;
  std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), selection.r,
              rng);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

absl::StatusOr<AttackPlan> BuildPlan(AttackStrategy strategy,
                                     const AttackContext& ctx,
                                     double confidence, Rng& rng) {
  switch (strategy) {
    case AttackStrategy::kRia:
      return RiaPlan(ctx, rng);
    case AttackStrategy::kRoa:
      return RoaPlan(ctx, rng);
    case AttackStrategy::kOia:
      return OiaPlan(ctx, rng);
    case AttackStrategy::kMpoia: {
      absl::StatusOr<ConfidenceConfig> conf = MakeConfidence(confidence);
      if (!conf.ok()) return conf.status();
      return MpoiaPlan(ctx, *conf, rng);
    }
    case AttackStrategy::kRk:
      return RkPlan(ctx, rng);
    case AttackStrategy::kNf:
      return NfPlan(ctx, rng);
  }
  return absl::InternalError("unreachable");
}

absl::StatusOr<Knowledge> BuildKnowledge(const ExperimentConfig& config,
                                         const Dataset& dataset, Rng& rng) {
  const std::vector<int64_t>& counts = dataset.counts();
  std::vector<double> truth(counts.begin(), counts.end());
  if (config.attack == AttackStrategy::kNf) {
    absl::StatusOr<NoisyCounts> noisy =
        EstimateNoisyCounts(counts, config.protocol,
                            EffectiveEpsilonPrime(config), config.rho, rng);
    if (!noisy.ok()) return noisy.status();
    return Knowledge(*noisy);
  }
  if (config.attack == AttackStrategy::kRk) {
    RankOnly ranks;
    ranks.order = Rank(truth).order;
    ranks.f_min = *std::min_element(truth.begin(), truth.end());
    ranks.f_max = *std::max_element(truth.begin(), truth.end());
    return Knowledge(ranks);
  }
  return Knowledge(ExactCounts{truth});
}

void FillCommonFields(const ExperimentConfig& config, int trial, uint64_t seed,
                      ResultRow& row) {
  row.dataset = DatasetName(config.dataset);
  row.protocol = std::string(ProtocolName(config.protocol));
  row.attack = config.attack ? std::string(AttackName(*config.attack)) : "none";
  row.defense = FormatDefensePipeline(config.defenses);
  row.direction = std::string(DirectionName(config.direction));
  row.beta = config.beta;
  row.epsilon = EffectiveEpsilon(config);
  row.r = config.targets.kind == TargetSelection::Kind::kList
              ? static_cast<int>(config.targets.items.size())
              : config.targets.r;
  row.rho = config.rho;
  row.eps_prime = EffectiveEpsilonPrime(config);
  row.confidence = config.confidence;
  row.g = config.g;
  row.k = config.k;
  row.trial = trial;
  row.seed = seed;
}

absl::StatusOr<ResultRow> RunHeavyHitterTrial(const ExperimentConfig& config,
                                              const Dataset& dataset, int trial,
                                              uint64_t trial_seed) {
  ResultRow row;
  FillCommonFields(config, trial, trial_seed, row);
  row.gain = kNaN;
  Rng target_rng(DeriveSeed(trial_seed, {kTargetStream}));
  absl::StatusOr<std::vector<int>> targets = SelectTargets(
      config.targets, dataset, Mode::kHeavyHitter, config.k, target_rng);
  if (!targets.ok()) return targets.status();
  absl::StatusOr<TargetSpec> spec =
      MakeTargetSpec(dataset.d(), *targets, Direction::kLower);
  if (!spec.ok()) return spec.status();
  absl::StatusOr<PemConfig> pem =
      MakePemConfig(dataset.d(), config.g, config.k, config.gamma);
  if (!pem.ok()) return pem.status();
  const int64_t m = config.attack ? FakeUsersFor(config.beta, dataset.n()) : 0;
  const AttackStrategy strategy = config.attack.value_or(AttackStrategy::kRia);
  Rng rng(DeriveSeed(trial_seed, {kPemStream}));
  absl::StatusOr<PemAttackResult> result =
      PemAttack(dataset, *pem, EffectiveEpsilon(config), strategy, m, *spec, rng);
  if (!result.ok()) return result.status();
  row.sr = result->success_rate;
  row.fake_users = m;
  return row;
}

absl::StatusOr<ResultRow> RunRankingTrial(const ExperimentConfig& config,
                                          const Dataset& dataset, int trial,
                                          uint64_t trial_seed,
                                          TrialArtifacts* artifacts) {
  ResultRow row;
  FillCommonFields(config, trial, trial_seed, row);
  row.sr = kNaN;
  const int d = dataset.d();
  const int64_t n = dataset.n();
  absl::StatusOr<ProtocolParams> params =
      MakeParams(config.protocol, d, EffectiveEpsilon(config));
  if (!params.ok()) return params.status();

  Rng target_rng(DeriveSeed(trial_seed, {kTargetStream}));
  absl::StatusOr<std::vector<int>> targets = SelectTargets(
      config.targets, dataset, Mode::kRanking, config.k, target_rng);
  if (!targets.ok()) return targets.status();
  absl::StatusOr<TargetSpec> spec =
      MakeTargetSpec(d, *targets, config.direction);
  if (!spec.ok()) return spec.status();

  const bool detect =
      std::find(config.defenses.begin(), config.defenses.end(),
                Defense::kDetect) != config.defenses.end() &&
      config.protocol == Protocol::kOue;

  // Genuine reports.
  Rng genuine_rng(DeriveSeed(trial_seed, {kGenuineStream}));
  std::vector<Report> genuine_reports;
  std::vector<int64_t> genuine_support;
  if (detect) {
    genuine_reports = PerturbPopulation(dataset.counts(), *params, genuine_rng);
    genuine_support.assign(d, 0);
    for (const Report& r : genuine_reports) {
      AccumulateSupport(r, *params, genuine_support);
    }
  } else {
    genuine_support =
        SimulateSupportCounts(dataset.counts(), *params, genuine_rng);
  }
  const std::vector<double> before =
      EstimateFromSupport(genuine_support, n, *params).values;

  // Fake reports.
  AttackPlan plan;
  const int64_t m = config.attack ? FakeUsersFor(config.beta, n) : 0;
  row.fake_users = m;
  if (m > 0) {
    Rng knowledge_rng(DeriveSeed(trial_seed, {kKnowledgeStream}));
    absl::StatusOr<Knowledge> knowledge =
        BuildKnowledge(config, dataset, knowledge_rng);
    if (!knowledge.ok()) return knowledge.status();
    AttackContext ctx;
    ctx.knowledge = *std::move(knowledge);
    ctx.params = *params;
    ctx.spec = *spec;
    ctx.n = n;
    ctx.m = m;
    ctx.num_candidate_seeds = config.num_candidate_seeds;
    Rng attack_rng(DeriveSeed(trial_seed, {kAttackStream}));
    absl::StatusOr<AttackPlan> built =
        BuildPlan(*config.attack, ctx, config.confidence, attack_rng);
    if (!built.ok()) return built.status();
    plan = *std::move(built);
  }
  row.audit = AuditPlan(plan, *spec, *params);

  // Aggregation, with detection as a pre-filter.
  std::vector<int64_t> support = genuine_support;
  int64_t total_reports = n + static_cast<int64_t>(plan.reports.size());
  if (detect) {
    std::vector<Report> all = std::move(genuine_reports);
    all.insert(all.end(), plan.reports.begin(), plan.reports.end());
    const std::vector<size_t> flagged = DetectFakeOue(all, config.detection);
    std::vector<bool> drop(all.size(), false);
    for (size_t i : flagged) drop[i] = true;
    std::fill(support.begin(), support.end(), 0);
    total_reports = 0;
    for (size_t i = 0; i < all.size(); ++i) {
      if (drop[i]) continue;
      AccumulateSupport(all[i], *params, support);
      ++total_reports;
    }
    row.flagged = static_cast<int64_t>(flagged.size());
  } else {
    for (const Report& r : plan.reports) AccumulateSupport(r, *params, support);
  }
  if (total_reports == 0) {
    return absl::FailedPreconditionError("every report was filtered out");
  }
  std::vector<double> after =
      EstimateFromSupport(support, total_reports, *params).values;
  for (Defense defense : config.defenses) {
    switch (defense) {
      case Defense::kNone:
      case Defense::kDetect:
        break;
      case Defense::kNormalize: {
        absl::StatusOr<std::vector<double>> normalized = Normalize(after);
        if (!normalized.ok()) return normalized.status();
        after = *std::move(normalized);
        break;
      }
      case Defense::kLdpRecover:
      case Defense::kLdpRecoverStar: {
        RecoverConfig recover;
        recover.known_m = std::max<int64_t>(0, m - row.flagged);
        recover.per_fake_support = DefaultPerFakeSupport(*params);
        absl::StatusOr<std::vector<double>> recovered;
        if (defense == Defense::kLdpRecoverStar) {
          // Items that receive no fake support: targets when lowering,
          // non-targets when elevating.
          recover.known_targets = config.direction == Direction::kLower
                                      ? spec->targets
                                      : spec->nontargets;
          recovered = LdpRecoverStar(support, total_reports, *params, recover);
        } else {
          recovered = LdpRecover(support, total_reports, *params, recover);
        }
        if (!recovered.ok()) return recovered.status();
        after = *std::move(recovered);
        break;
      }
    }
  }

  absl::StatusOr<int64_t> gain = OverallGain(Rank(before), Rank(after), *spec);
  if (!gain.ok()) return gain.status();
  row.gain = static_cast<double>(*gain);
  if (artifacts != nullptr) {
    artifacts->plan = std::move(plan);
    artifacts->before = before;
    artifacts->after = std::move(after);
    artifacts->targets = spec->targets;
  }
  return row;
}

absl::Status EnsureParentDir(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return absl::OkStatus();
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrCat(
        "cannot create output directory ", parent.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

}  // namespace

std::string DatasetName(const DatasetSpec& spec) {
  if (spec.kind == "csv") {
    return std::filesystem::path(spec.csv_path).stem().string();
  }
  return spec.kind;
}

absl::StatusOr<Dataset> BuildDataset(const DatasetSpec& spec,
                                     uint64_t master_seed) {
  if (spec.kind == "zipf") {
    Rng rng(DeriveSeed(master_seed, {kDatasetStream}));
    return GenZipf(spec.d, spec.n, spec.zipf_exponent, rng);
  }
  if (spec.kind == "csv") {
    return LoadCsv(spec.csv_path, spec.column, spec.max_domain);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown dataset kind: ", spec.kind));
}

absl::StatusOr<TargetSelection> ParseTargets(absl::string_view text) {
  std::pair<std::string, std::string> parts =
      absl::StrSplit(text, absl::MaxSplits(':', 1));
  TargetSelection selection;
  const std::string kind = absl::AsciiStrToLower(parts.first);
  if (kind == "list") {
    selection.kind = TargetSelection::Kind::kList;
    for (absl::string_view item :
         absl::StrSplit(parts.second, ',', absl::SkipWhitespace())) {
      absl::StatusOr<int> v = ParseInt(item);
      if (!v.ok()) return v.status();
      selection.items.push_back(*v);
    }
    if (selection.items.empty()) {
      return absl::InvalidArgumentError("empty target list");
    }
    selection.r = static_cast<int>(selection.items.size());
    return selection;
  }
  if (kind == "top") {
    selection.kind = TargetSelection::Kind::kTop;
  } else if (kind == "random") {
    selection.kind = TargetSelection::Kind::kRandom;
  } else {
    return absl::InvalidArgumentError(absl::StrCat("bad target selector: ", text));
  }
  absl::StatusOr<int> r = ParseInt(parts.second);
  if (!r.ok()) return r.status();
  if (*r < 1) return absl::InvalidArgumentError("r must be positive");
  selection.r = *r;
  return selection;
}

std::string FormatTargets(const TargetSelection& selection) {
  switch (selection.kind) {
    case TargetSelection::Kind::kRandom:
      return absl::StrCat("random:", selection.r);
    case TargetSelection::Kind::kTop:
      return absl::StrCat("top:", selection.r);
    case TargetSelection::Kind::kList:
      return absl::StrCat("list:", absl::StrJoin(selection.items, ","));
  }
  return "";
}

absl::StatusOr<std::vector<Defense>> ParseDefensePipeline(absl::string_view text) {
  std::vector<Defense> pipeline;
  for (absl::string_view part : absl::StrSplit(text, '+', absl::SkipEmpty())) {
    absl::StatusOr<Defense> defense = ParseDefense(part);
    if (!defense.ok()) return defense.status();
    if (*defense != Defense::kNone) pipeline.push_back(*defense);
  }
  return pipeline;
}

std::string FormatDefensePipeline(std::span<const Defense> pipeline) {
  if (pipeline.empty()) return "none";
  return absl::StrJoin(pipeline, "+", [](std::string* out, Defense d) {
    absl::StrAppend(out, DefenseName(d));
  });
}

double EffectiveEpsilon(const ExperimentConfig& config) {
  if (config.epsilon) return *config.epsilon;
  if (config.mode == Mode::kRanking) {
    if (config.protocol == Protocol::kOue &&
        config.direction == Direction::kLower) {
      return 3.0;
    }
    if (config.protocol == Protocol::kKrr &&
        config.direction == Direction::kElevate) {
      return 4.5;
    }
  }
  return 1.0;
}

double EffectiveEpsilonPrime(const ExperimentConfig& config) {
  return config.epsilon_prime.value_or(EffectiveEpsilon(config));
}

int64_t FakeUsersFor(double beta, int64_t n) {
  if (beta <= 0) return 0;
  return static_cast<int64_t>(std::llround(beta * static_cast<double>(n) /
                                           (1.0 - beta)));
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  auto out_of_range = [](absl::string_view name, double value) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " out of range: ", value));
  };
  if (config.trials < 1) return out_of_range("trials", config.trials);
  if (!(config.beta >= 0 && config.beta <= 0.1)) {
    return out_of_range("beta", config.beta);
  }
  const double eps = EffectiveEpsilon(config);
  if (!(eps >= 0.5 && eps <= 6)) return out_of_range("epsilon", eps);
  const double eps_prime = EffectiveEpsilonPrime(config);
  if (!(eps_prime >= 0.5 && eps_prime <= 6)) {
    return out_of_range("eps_prime", eps_prime);
  }
  const int r = config.targets.kind == TargetSelection::Kind::kList
                    ? static_cast<int>(config.targets.items.size())
                    : config.targets.r;
  if (r < 1 || r > 20) return out_of_range("r", r);
  if (!(config.confidence >= 0.5 && config.confidence <= 0.99)) {
    return out_of_range("confidence", config.confidence);
  }
  if (!(config.rho > 0 && config.rho <= 1)) return out_of_range("rho", config.rho);
  if (config.g < 1) return out_of_range("g", config.g);
  if (config.k < 1) return out_of_range("k", config.k);
  if (config.num_candidate_seeds < 1) {
    return out_of_range("num_candidate_seeds", config.num_candidate_seeds);
  }
  if (config.mode == Mode::kHeavyHitter && config.protocol != Protocol::kOlh) {
    return absl::InvalidArgumentError("heavy-hitter mode runs over olh");
  }
  if (config.mode == Mode::kHeavyHitter && config.attack &&
      *config.attack != AttackStrategy::kRia &&
      *config.attack != AttackStrategy::kRoa &&
      *config.attack != AttackStrategy::kOia) {
    return absl::InvalidArgumentError(
        "heavy-hitter mode supports the ria, roa and oia attacks");
  }
  return absl::OkStatus();
}

absl::StatusOr<ResultRow> RunTrial(const ExperimentConfig& config,
                                   const Dataset& dataset, int trial,
                                   bool timing, TrialArtifacts* artifacts) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  const uint64_t trial_seed =
      DeriveSeed(config.seed, {static_cast<uint64_t>(trial)});
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<ResultRow> row =
      config.mode == Mode::kHeavyHitter
          ? RunHeavyHitterTrial(config, dataset, trial, trial_seed)
          : RunRankingTrial(config, dataset, trial, trial_seed, artifacts);
  if (row.ok() && timing) {
    row->ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  }
  return row;
}

absl::StatusOr<std::vector<ResultRow>> RunCell(const ExperimentConfig& config,
                                               const Dataset& dataset,
                                               const RunOptions& options) {
  return RunCells(std::span<const ExperimentConfig>(&config, 1), dataset,
                  options);
}

absl::StatusOr<std::vector<ResultRow>> RunCells(
    std::span<const ExperimentConfig> cells, const Dataset& dataset,
    const RunOptions& options) {
  std::vector<std::pair<size_t, int>> tasks;
  for (size_t c = 0; c < cells.size(); ++c) {
    if (absl::Status s = ValidateConfig(cells[c]); !s.ok()) return s;
    for (int t = 0; t < cells[c].trials; ++t) tasks.emplace_back(c, t);
  }
  std::vector<absl::StatusOr<ResultRow>> results(
      tasks.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      results[i] = RunTrial(cells[tasks[i].first], dataset, tasks[i].second,
                            options.timing);
    }
  };
  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int>(threads, 1, std::max<int>(1, tasks.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (absl::StatusOr<ResultRow>& r : results) {
    if (!r.ok()) return r.status();
    rows.push_back(*std::move(r));
  }
  return rows;
}

absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view text) {
  std::pair<std::string, std::string> parts =
      absl::StrSplit(text, absl::MaxSplits('=', 1));
  SweepAxis axis;
  axis.name = std::string(absl::StripAsciiWhitespace(parts.first));
  if (axis.name.empty() || parts.second.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("bad sweep axis: ", text));
  }
  // start:stop:step only without commas, so lists may hold values such as
  // random:5.
  std::vector<std::string> range = absl::StrSplit(parts.second, ':');
  if (range.size() == 3 && !absl::StrContains(parts.second, ',')) {
    absl::StatusOr<double> start = ParseDouble(range[0]);
    absl::StatusOr<double> stop = ParseDouble(range[1]);
    absl::StatusOr<double> step = ParseDouble(range[2]);
    if (!start.ok() || !stop.ok() || !step.ok() || !(*step > 0) ||
        *stop < *start) {
      return absl::InvalidArgumentError(absl::StrCat("bad sweep range: ", text));
    }
    const int64_t count =
        static_cast<int64_t>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
    for (int64_t i = 0; i < count; ++i) {
      axis.values.push_back(absl::StrFormat("%.10g", *start + i * *step));
    }
  } else {
    for (absl::string_view v :
         absl::StrSplit(parts.second, ',', absl::SkipWhitespace())) {
      axis.values.emplace_back(absl::StripAsciiWhitespace(v));
    }
  }
  if (axis.values.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("empty sweep axis: ", text));
  }
  return axis;
}

absl::Status ApplyAxisValue(absl::string_view name, absl::string_view value,
                            ExperimentConfig& config) {
  const std::string key = absl::AsciiStrToLower(name);
  auto set_double = [&](double& field) -> absl::Status {
    absl::StatusOr<double> v = ParseDouble(value);
    if (!v.ok()) return v.status();
    field = *v;
    return absl::OkStatus();
  };
  auto set_int = [&](int& field) -> absl::Status {
    absl::StatusOr<int> v = ParseInt(value);
    if (!v.ok()) return v.status();
    field = *v;
    return absl::OkStatus();
  };
  if (key == "beta") return set_double(config.beta);
  if (key == "rho") return set_double(config.rho);
  if (key == "confidence") return set_double(config.confidence);
  if (key == "g") return set_int(config.g);
  if (key == "k") return set_int(config.k);
  if (key == "epsilon" || key == "eps_prime" || key == "epsilon_prime" ||
      key == "epsilon-prime") {
    absl::StatusOr<double> v = ParseDouble(value);
    if (!v.ok()) return v.status();
    (key == "epsilon" ? config.epsilon : config.epsilon_prime) = *v;
    return absl::OkStatus();
  }
  if (key == "r") {
    if (config.targets.kind == TargetSelection::Kind::kList) {
      return absl::InvalidArgumentError("cannot sweep r with a target list");
    }
    return set_int(config.targets.r);
  }
  if (key == "attack") {
    absl::StatusOr<AttackStrategy> attack = ParseAttack(value);
    if (!attack.ok()) return attack.status();
    config.attack = *attack;
    return absl::OkStatus();
  }
  if (key == "defense") {
    absl::StatusOr<std::vector<Defense>> pipeline = ParseDefensePipeline(value);
    if (!pipeline.ok()) return pipeline.status();
    config.defenses = *std::move(pipeline);
    return absl::OkStatus();
  }
  if (key == "protocol") {
    absl::StatusOr<Protocol> protocol = ParseProtocol(value);
    if (!protocol.ok()) return protocol.status();
    config.protocol = *protocol;
    return absl::OkStatus();
  }
  if (key == "direction") {
    absl::StatusOr<Direction> direction = ParseDirection(value);
    if (!direction.ok()) return direction.status();
    config.direction = *direction;
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown sweep axis: ", name));
}

absl::StatusOr<std::vector<ExperimentConfig>> ExpandSweep(
    const ExperimentConfig& base, std::span<const SweepAxis> axes) {
  std::vector<ExperimentConfig> cells = {base};
  for (const SweepAxis& axis : axes) {
    std::vector<ExperimentConfig> expanded;
    expanded.reserve(cells.size() * axis.values.size());
    for (const ExperimentConfig& cell : cells) {
      for (const std::string& value : axis.values) {
        ExperimentConfig next = cell;
        if (absl::Status s = ApplyAxisValue(axis.name, value, next); !s.ok()) {
          return s;
        }
        expanded.push_back(std::move(next));
      }
    }
    cells = std::move(expanded);
  }
  for (const ExperimentConfig& cell : cells) {
    if (absl::Status s = ValidateConfig(cell); !s.ok()) return s;
  }
  return cells;
}

std::string FormatResultRow(const ResultRow& row) {
  return absl::StrCat(
      row.dataset, ",", row.protocol, ",", row.attack, ",", row.defense, ",",
      row.direction, ",", FormatNumber(row.beta), ",", FormatNumber(row.epsilon),
      ",", row.r, ",", FormatNumber(row.rho), ",", FormatNumber(row.eps_prime),
      ",", FormatNumber(row.confidence), ",", row.g, ",", row.k, ",", row.trial,
      ",", row.seed, ",", FormatNumber(row.gain), ",", FormatNumber(row.sr), ",",
      absl::StrFormat("%.3f", row.ms));
}

absl::StatusOr<std::vector<ResultRow>> ParseResultsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    return absl::InvalidArgumentError("results header mismatch");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = absl::StrSplit(line, ',');
    if (f.size() != 18) {
      return absl::InvalidArgumentError(absl::StrCat("bad results row: ", line));
    }
    ResultRow row;
    row.dataset = f[0];
    row.protocol = f[1];
    row.attack = f[2];
    row.defense = f[3];
    row.direction = f[4];
    bool ok = absl::SimpleAtod(f[5], &row.beta) &&
              absl::SimpleAtod(f[6], &row.epsilon) &&
              absl::SimpleAtoi(f[7], &row.r) &&
              absl::SimpleAtod(f[8], &row.rho) &&
              absl::SimpleAtod(f[9], &row.eps_prime) &&
              absl::SimpleAtod(f[10], &row.confidence) &&
              absl::SimpleAtoi(f[11], &row.g) && absl::SimpleAtoi(f[12], &row.k) &&
              absl::SimpleAtoi(f[13], &row.trial) &&
              absl::SimpleAtoi(f[14], &row.seed) &&
              absl::SimpleAtod(f[15], &row.gain) &&
              absl::SimpleAtod(f[16], &row.sr) && absl::SimpleAtod(f[17], &row.ms);
    if (!ok) {
      return absl::InvalidArgumentError(absl::StrCat("bad results row: ", line));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::Status WriteResultsCsv(const std::string& path,
                             std::span<const ResultRow> rows) {
  if (absl::Status s = EnsureParentDir(path); !s.ok()) return s;
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << kResultsHeader << "\n";
  for (const ResultRow& row : rows) out << FormatResultRow(row) << "\n";
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::Status WriteManifest(const std::string& path,
                           const ExperimentConfig& base,
                           const ManifestInfo& info) {
  if (absl::Status s = EnsureParentDir(path); !s.ok()) return s;
  nlohmann::ordered_json j;
  j["figure"] = info.figure;
  j["command"] = info.command;
  j["mode"] = base.mode == Mode::kHeavyHitter ? "hh" : "ranking";
  j["dataset"] = {{"kind", base.dataset.kind},
                  {"name", DatasetName(base.dataset)},
                  {"d", base.dataset.d},
                  {"n", base.dataset.n},
                  {"zipf_exponent", base.dataset.zipf_exponent},
                  {"csv_path", base.dataset.csv_path},
                  {"column", base.dataset.column}};
  j["protocol"] = ProtocolName(base.protocol);
  j["attack"] = base.attack ? std::string(AttackName(*base.attack)) : "none";
  j["defense"] = FormatDefensePipeline(base.defenses);
  j["direction"] = DirectionName(base.direction);
  j["beta"] = base.beta;
  j["epsilon"] = EffectiveEpsilon(base);
  j["targets"] = FormatTargets(base.targets);
  j["confidence"] = base.confidence;
  j["rho"] = base.rho;
  j["epsilon_prime"] = EffectiveEpsilonPrime(base);
  j["g"] = base.g;
  j["k"] = base.k;
  j["gamma"] = base.gamma ? nlohmann::ordered_json(*base.gamma)
                          : nlohmann::ordered_json(nullptr);
  j["trials"] = base.trials;
  j["seed"] = base.seed;
  j["num_candidate_seeds"] = base.num_candidate_seeds;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const SweepAxis& axis : info.axes) {
    axes.push_back({{"name", axis.name}, {"values", axis.values}});
  }
  j["axes"] = axes;
  j["num_cells"] = info.num_cells;
  j["num_rows"] = static_cast<int64_t>(info.num_cells) * base.trials;
  j["timing"] = info.timing;
  j["results_header"] = kResultsHeader;
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << j.dump(2) << "\n";
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

AttackContext RandomTinyInstance(Rng& rng) {
  std::uniform_int_distribution<int> pick_d(4, 8);
  std::uniform_int_distribution<int> pick_r(1, 2);
  std::uniform_int_distribution<int> pick_m(1, 6);
  std::uniform_int_distribution<int> pick_count(1, 100);
  std::uniform_real_distribution<double> pick_eps(0.5, 3.0);
  const int d = pick_d(rng);
  const int r = pick_r(rng);
  AttackContext ctx;
  std::vector<double> counts(d);
  int64_t n = 0;
  for (double& c : counts) {
    c = pick_count(rng);
    n += static_cast<int64_t>(c);
  }
  ctx.knowledge = ExactCounts{counts};
  ctx.params = *MakeParams(Protocol::kKrr, d, pick_eps(rng));
  std::vector<int> items(d);
  for (int v = 0; v < d; ++v) items[v] = v;
  std::vector<int> targets;
  std::sample(items.begin(), items.end(), std::back_inserter(targets), r, rng);
  ctx.spec = *MakeTargetSpec(d, targets, Direction::kLower);
  ctx.n = n;
  ctx.m = pick_m(rng);
  return ctx;
}

absl::StatusOr<OracleSummary> RunOracleChecks(int instances, uint64_t seed) {
  if (instances < 1) return absl::InvalidArgumentError("instances must be >= 1");
  Rng rng(seed);
  OracleSummary summary;
  for (int i = 0; i < instances; ++i) {
    const AttackContext ctx = RandomTinyInstance(rng);
    absl::StatusOr<BruteForceResult> brute = BruteForceOptimal(ctx);
    if (!brute.ok()) return brute.status();
    absl::StatusOr<AttackPlan> exact = ExactValueAllocation(ctx);
    if (!exact.ok()) return exact.status();
    absl::StatusOr<AttackPlan> oia = OiaKrr(ctx);
    if (!oia.ok()) return oia.status();
    absl::StatusOr<int64_t> exact_gain = ExpectedGain(ctx, *exact);
    absl::StatusOr<int64_t> oia_gain = ExpectedGain(ctx, *oia);
    if (!exact_gain.ok()) return exact_gain.status();
    if (!oia_gain.ok()) return oia_gain.status();
    ++summary.instances;
    summary.exact_matches += *exact_gain == brute->best_gain;
    summary.oia_optimal += *oia_gain >= brute->best_gain;
  }
  return summary;
}

}  // namespace ldprank
