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


#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "boost/math/distributions/normal.hpp"
#include "greedy_engine.h"
#include "ldprank/attacks.h"

namespace ldprank {

absl::string_view AttackName(AttackStrategy strategy) {
  switch (strategy) {
    case AttackStrategy::kRia:
      return "ria";
    case AttackStrategy::kRoa:
      return "roa";
    case AttackStrategy::kOia:
      return "oia";
    case AttackStrategy::kMpoia:
      return "mpoia";
    case AttackStrategy::kRk:
      return "rk";
    case AttackStrategy::kNf:
      return "nf";
  }
  return "unknown";
}

absl::StatusOr<AttackStrategy> ParseAttack(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (AttackStrategy s :
       {AttackStrategy::kRia, AttackStrategy::kRoa, AttackStrategy::kOia,
        AttackStrategy::kMpoia, AttackStrategy::kRk, AttackStrategy::kNf}) {
    if (AttackName(s) == lower) return s;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown attack: ", name));
}

absl::StatusOr<std::vector<double>> LinearRankFrequencies(int d, double f_min,
                                                          double f_max) {
  if (d < 1) return absl::InvalidArgumentError("domain must be non-empty");
  if (f_max < f_min) return absl::InvalidArgumentError("f_max < f_min");
  std::vector<double> freqs(d, f_max);
  if (d == 1) return freqs;
  const double step = (f_max - f_min) / (d - 1);
  for (int i = 0; i < d; ++i) freqs[i] = f_max - i * step;
  return freqs;
}

absl::StatusOr<std::vector<double>> BelievedCounts(const AttackContext& ctx) {
  if (const auto* exact = std::get_if<ExactCounts>(&ctx.knowledge)) {
    return exact->counts;
  }
  if (const auto* noisy = std::get_if<NoisyCounts>(&ctx.knowledge)) {
    return noisy->estimates;
  }
  const auto& ranks = std::get<RankOnly>(ctx.knowledge);
  const int d = static_cast<int>(ranks.order.size());
  absl::StatusOr<std::vector<double>> freqs =
      LinearRankFrequencies(d, ranks.f_min, ranks.f_max);
  if (!freqs.ok()) return freqs.status();
  std::vector<double> counts(d, 0);
  std::vector<bool> seen(d, false);
  for (int i = 0; i < d; ++i) {
    const int v = ranks.order[i];
    if (v < 0 || v >= d || seen[v]) {
      return absl::InvalidArgumentError("rank order is not a permutation");
    }
    seen[v] = true;
    counts[v] = (*freqs)[i];
  }
  return counts;
}

absl::StatusOr<std::vector<double>> ExpectedPerturbed(const AttackContext& ctx) {
  absl::StatusOr<std::vector<double>> counts = BelievedCounts(ctx);
  if (!counts.ok()) return counts.status();
  const double base = static_cast<double>(ctx.n) * ctx.params.q;
  const double scale = ctx.params.p - ctx.params.q;
  for (double& c : *counts) c = base + c * scale;
  return counts;
}

absl::StatusOr<EffectiveAttackState> BuildState(const AttackContext& ctx) {
  absl::StatusOr<internal::OvertakeState> state =
      internal::OvertakeState::Create(ctx, 0);
  if (!state.ok()) return state.status();
  const int d = state->d();
  EffectiveAttackState result;
  result.cost.assign(d, kInfiniteCost);
  result.superiors.assign(d, {});
  for (int v : state->pushers()) {
    result.cost[v] = state->Cost(v);
    result.superiors[v] = state->superiors(v);
    (result.cost[v] == kInfiniteCost ? result.ineffective : result.effective)
        .push_back(v);
  }
  const std::vector<double>& counts = state->counts();
  auto by_count = [&](int a, int b) {
    return counts[a] != counts[b] ? counts[a] > counts[b] : a < b;
  };
  std::sort(result.effective.begin(), result.effective.end(), by_count);
  std::sort(result.ineffective.begin(), result.ineffective.end(), by_count);
  return result;
}

absl::StatusOr<ConfidenceConfig> MakeConfidence(double level) {
  if (!(level > 0 && level < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("confidence level must lie in (0, 1), got ", level));
  }
  ConfidenceConfig config;
  config.level = level;
  config.z_alpha =
      level == 0.5 ? 0.0 : boost::math::quantile(boost::math::normal(), level);
  return config;
}

double HarmonicScore(std::span<const double> costs) {
  double inverse = 0;
  for (double c : costs) {
    if (c != kInfiniteCost) inverse += 1.0 / c;
  }
  return inverse > 0 ? 1.0 / inverse : kInfiniteCost;
}

absl::StatusOr<int64_t> ExpectedGain(const AttackContext& ctx,
                                     const AttackPlan& plan) {
  absl::StatusOr<std::vector<double>> counts = BelievedCounts(ctx);
  if (!counts.ok()) return counts.status();
  const int d = static_cast<int>(counts->size());
  if (!plan.per_item_alloc.empty() &&
      static_cast<int>(plan.per_item_alloc.size()) != d) {
    return absl::InvalidArgumentError("allocation length differs from d");
  }
  const double scale = ctx.params.p - ctx.params.q;
  std::vector<double> before(d);
  std::vector<double> after(d);
  for (int v = 0; v < d; ++v) {
    before[v] = scale * (*counts)[v];
    after[v] = before[v] + (plan.per_item_alloc.empty()
                                ? 0.0
                                : static_cast<double>(plan.per_item_alloc[v]));
  }
  return OverallGain(Rank(before), Rank(after), ctx.spec);
}

}  // namespace ldprank
