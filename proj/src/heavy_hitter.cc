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


#include "ldprank/heavy_hitter.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "ldprank/protocols.h"

namespace ldprank {
namespace {

int CeilLog2(int64_t x) {
  int bits = 0;
  while ((int64_t{1} << bits) < x) ++bits;
  return bits;
}

// Fake reports for one round, given the sorted candidate prefixes, the
// group's genuine size and its fake budget.
using RoundAttacker = std::function<absl::StatusOr<std::vector<OlhReport>>(
    int round, const std::vector<uint64_t>& candidates, int64_t genuine,
    int64_t fakes, Rng& rng)>;

std::vector<int64_t> BalancedSplit(int64_t total, int parts, Rng* shuffle_rng) {
  std::vector<int64_t> sizes(parts, total / parts);
  std::vector<int> order(parts);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle_rng != nullptr) std::shuffle(order.begin(), order.end(), *shuffle_rng);
  for (int64_t i = 0; i < total % parts; ++i) ++sizes[order[i]];
  return sizes;
}

absl::StatusOr<PemResult> RunPem(const Dataset& dataset, const PemConfig& config,
                                 double epsilon, const std::vector<int64_t>& fakes,
                                 const RoundAttacker& attacker, Rng& rng) {
  if (absl::Status s = ValidatePemConfig(config, dataset.d()); !s.ok()) return s;
  absl::StatusOr<ProtocolParams> params = MakeParams(Protocol::kOlh, 2, epsilon);
  if (!params.ok()) return params.status();
  const int d = dataset.d();
  const int g = config.g;

  // Balanced random split of genuine users into groups.
  std::vector<int> users;
  users.reserve(dataset.n());
  for (int v = 0; v < d; ++v) users.insert(users.end(), dataset.counts()[v], v);
  std::shuffle(users.begin(), users.end(), rng);
  const std::vector<int64_t> group_size = BalancedSplit(dataset.n(), g, nullptr);

  PemResult result;
  std::vector<uint64_t> survivors;
  int64_t offset = 0;
  std::bernoulli_distribution keep(params->p);
  std::uniform_int_distribution<int> other(0, params->dprime - 2);
  for (int j = 1; j <= g; ++j) {
    const int length = PrefixLength(config, j);
    const int shift = config.gamma - length;
    auto valid = [&](uint64_t prefix) { return (prefix << shift) < static_cast<uint64_t>(d); };
    std::vector<uint64_t> candidates;
    if (j == 1) {
      for (uint64_t p = 0; p < (uint64_t{1} << length) && valid(p); ++p) {
        candidates.push_back(p);
      }
    } else {
      const int extend = length - PrefixLength(config, j - 1);
      for (uint64_t p : survivors) {
        for (uint64_t s = 0; s < (uint64_t{1} << extend); ++s) {
          const uint64_t c = (p << extend) | s;
          if (valid(c)) candidates.push_back(c);
        }
      }
      std::sort(candidates.begin(), candidates.end());
    }
    const int num_candidates = static_cast<int>(candidates.size());
    std::vector<int64_t> support(num_candidates, 0);
    auto tally = [&](uint64_t seed, int h) {
      for (int i = 0; i < num_candidates; ++i) {
        support[i] += static_cast<int>(HashEval(seed, candidates[i], params->dprime)) == h;
      }
    };
    const int64_t genuine = group_size[j - 1];
    for (int64_t u = 0; u < genuine; ++u) {
      const uint64_t prefix = static_cast<uint64_t>(users[offset + u]) >> shift;
      const uint64_t seed = rng();
      const int h = static_cast<int>(HashEval(seed, prefix, params->dprime));
      int reported = h;
      if (!keep(rng)) {
        const int x = other(rng);
        reported = x >= h ? x + 1 : x;
      }
      tally(seed, reported);
    }
    offset += genuine;
    const int64_t fake = fakes.empty() ? 0 : fakes[j - 1];
    if (fake > 0) {
      absl::StatusOr<std::vector<OlhReport>> reports =
          attacker(j, candidates, genuine, fake, rng);
      if (!reports.ok()) return reports.status();
      for (const OlhReport& r : *reports) tally(r.seed, r.hash_value);
    }
    const FrequencyEstimate estimate =
        EstimateFromSupport(support, genuine + fake, *params);
    const Ranking ranking = Rank(estimate.values);
    survivors.clear();
    for (int i = 0; i < std::min(config.k, num_candidates); ++i) {
      survivors.push_back(candidates[ranking.order[i]]);
    }
    result.round_prefixes.push_back(survivors);
  }
  for (uint64_t p : survivors) result.identified.push_back(static_cast<int>(p));
  return result;
}

std::vector<OlhReport> NeutralReports(int64_t count, int dprime, Rng& rng) {
  std::uniform_int_distribution<int> value(0, dprime - 1);
  std::vector<OlhReport> reports(count);
  for (OlhReport& r : reports) {
    r.seed = rng();
    r.hash_value = value(rng);
  }
  return reports;
}

}  // namespace

absl::StatusOr<PemConfig> MakePemConfig(int d, int g, int k,
                                        std::optional<int> gamma) {
  PemConfig config;
  config.g = g;
  config.k = k;
  config.gamma = gamma.has_value() ? *gamma : CeilLog2(d);
  if (absl::Status s = ValidatePemConfig(config, d); !s.ok()) return s;
  return config;
}

absl::Status ValidatePemConfig(const PemConfig& config, int d) {
  if (config.g < 1) return absl::InvalidArgumentError("g must be at least 1");
  if (config.k < 1 || config.k > d) {
    return absl::InvalidArgumentError(absl::StrCat("k must lie in [1, ", d, "]"));
  }
  if (config.gamma < 0 || config.gamma > 62 ||
      (int64_t{1} << config.gamma) < d) {
    return absl::InvalidArgumentError("2^gamma must cover the domain");
  }
  if (config.gamma < CeilLog2(config.k)) {
    return absl::InvalidArgumentError("gamma shorter than ceil(log2 k)");
  }
  if (config.k > (int64_t{1} << PrefixLength(config, 1))) {
    return absl::InvalidArgumentError("k exceeds the first-round prefix space");
  }
  return absl::OkStatus();
}

int PrefixLength(const PemConfig& config, int j) {
  const int base = CeilLog2(config.k);
  const int span = config.gamma - base;
  return base + (j * span + config.g - 1) / config.g;
}

absl::StatusOr<PemResult> PemIdentify(const Dataset& dataset,
                                      const PemConfig& config, double epsilon,
                                      Rng& rng) {
  return RunPem(dataset, config, epsilon, {}, nullptr, rng);
}

absl::StatusOr<PemAttackResult> PemAttack(const Dataset& dataset,
                                          const PemConfig& config,
                                          double epsilon,
                                          AttackStrategy strategy, int64_t m,
                                          const TargetSpec& spec, Rng& rng) {
  if (strategy != AttackStrategy::kRia && strategy != AttackStrategy::kRoa &&
      strategy != AttackStrategy::kOia) {
    return absl::InvalidArgumentError("PEM attack supports ria, roa and oia");
  }
  if (spec.direction != Direction::kLower || spec.d != dataset.d()) {
    return absl::InvalidArgumentError("PEM attack needs a lower-mode spec over the dataset");
  }
  if (m < 0) return absl::InvalidArgumentError("negative fake-user count");
  if (absl::Status s = ValidatePemConfig(config, dataset.d()); !s.ok()) return s;
  absl::StatusOr<ProtocolParams> olh = MakeParams(Protocol::kOlh, 2, epsilon);
  if (!olh.ok()) return olh.status();

  PemAttackResult out;
  out.fake_per_group = BalancedSplit(m, config.g, &rng);
  const double total = static_cast<double>(dataset.n());

  RoundAttacker attacker = [&](int round, const std::vector<uint64_t>& candidates,
                               int64_t genuine, int64_t fakes,
                               Rng& round_rng) -> absl::StatusOr<std::vector<OlhReport>> {
    const int shift = config.gamma - PrefixLength(config, round);
    const int c = static_cast<int>(candidates.size());
    std::unordered_map<uint64_t, int> index;
    for (int i = 0; i < c; ++i) index[candidates[i]] = i;
    // Population prefix counts scaled to the group.
    std::vector<double> counts(c, 0);
    for (int v = 0; v < dataset.d(); ++v) {
      auto it = index.find(static_cast<uint64_t>(v) >> shift);
      if (it != index.end()) counts[it->second] += dataset.counts()[v];
    }
    for (double& x : counts) x *= genuine / total;
    std::vector<int> targets;
    std::vector<bool> marked(c, false);
    for (int t : spec.targets) {
      auto it = index.find(static_cast<uint64_t>(t) >> shift);
      if (it != index.end() && !marked[it->second]) {
        marked[it->second] = true;
        targets.push_back(it->second);
      }
    }
    if (c < 2 || targets.empty() || static_cast<int>(targets.size()) == c) {
      return NeutralReports(fakes, olh->dprime, round_rng);
    }
    absl::StatusOr<TargetSpec> round_spec =
        MakeTargetSpec(c, targets, Direction::kLower);
    if (!round_spec.ok()) return round_spec.status();
    AttackContext ctx;
    ctx.knowledge = ExactCounts{counts};
    ctx.params = *olh;
    ctx.params.d = c;
    ctx.spec = *round_spec;
    ctx.n = genuine;
    ctx.m = fakes;
    ctx.item_keys = candidates;
    absl::StatusOr<AttackPlan> plan;
    if (strategy == AttackStrategy::kOia) {
      absl::StatusOr<EffectiveAttackState> state = BuildState(ctx);
      if (!state.ok()) return state.status();
      if (!state->effective.empty()) {
        const Ranking believed = Rank(counts);
        int inside = 0;
        for (int v : state->effective) inside += believed.rank_of[v] <= config.k;
        const size_t keep = std::min(state->effective.size(),
                                     static_cast<size_t>(inside) + targets.size());
        ctx.pusher_pool.assign(state->effective.begin(),
                               state->effective.begin() + keep);
      }
      plan = OiaOlh(ctx, round_rng);
    } else if (strategy == AttackStrategy::kRoa) {
      plan = RoaPlan(ctx, round_rng);
    } else {
      plan = RiaPlan(ctx, round_rng);
    }
    if (!plan.ok()) return plan.status();
    std::vector<OlhReport> reports;
    reports.reserve(plan->reports.size());
    for (const Report& r : plan->reports) reports.push_back(std::get<OlhReport>(r));
    return reports;
  };

  absl::StatusOr<PemResult> run =
      RunPem(dataset, config, epsilon, out.fake_per_group, attacker, rng);
  if (!run.ok()) return run.status();
  out.identified = run->identified;
  std::vector<double> truth(dataset.counts().begin(), dataset.counts().end());
  const Ranking true_ranking = Rank(truth);
  std::vector<int> true_top(true_ranking.order.begin(),
                            true_ranking.order.begin() + config.k);
  const SuccessRate sr = SuccessRateFromTopK(true_top, out.identified, spec);
  out.success_rate = sr.rate;
  out.targets_not_initially_top_k = sr.targets_not_initially_top_k;
  return out;
}

}  // namespace ldprank
