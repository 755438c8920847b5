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


#include "ldprank/ranking.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace ldprank {

absl::StatusOr<TargetSpec> MakeTargetSpec(int d, std::vector<int> targets,
                                          Direction direction) {
  if (d < 1) return absl::InvalidArgumentError("domain must be non-empty");
  if (targets.empty()) return absl::InvalidArgumentError("no target items");
  TargetSpec spec;
  spec.d = d;
  spec.direction = direction;
  spec.is_target.assign(d, false);
  for (int t : targets) {
    if (t < 0 || t >= d) {
      return absl::OutOfRangeError(absl::StrCat("target ", t, " outside [0, ", d, ")"));
    }
    if (spec.is_target[t]) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate target ", t));
    }
    spec.is_target[t] = true;
  }
  for (int v = 0; v < d; ++v) {
    (spec.is_target[v] ? spec.targets : spec.nontargets).push_back(v);
  }
  return spec;
}

Ranking Rank(std::span<const double> freqs) {
  Ranking ranking;
  const int d = static_cast<int>(freqs.size());
  ranking.order.resize(d);
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](int a, int b) { return freqs[a] > freqs[b]; });
  ranking.rank_of.resize(d);
  for (int i = 0; i < d; ++i) ranking.rank_of[ranking.order[i]] = i + 1;
  return ranking;
}

absl::StatusOr<int64_t> OverallGain(const Ranking& before, const Ranking& after,
                                    const TargetSpec& spec) {
  const size_t d = static_cast<size_t>(spec.d);
  if (before.rank_of.size() != d || after.rank_of.size() != d) {
    return absl::InvalidArgumentError("ranking domain mismatch");
  }
  int64_t gain = 0;
  for (int a : spec.nontargets) {
    for (int t : spec.targets) {
      if (spec.direction == Direction::kLower) {
        gain += before.rank_of[a] > before.rank_of[t] &&
                after.rank_of[a] < after.rank_of[t];
      } else {
        gain += before.rank_of[t] > before.rank_of[a] &&
                after.rank_of[t] < after.rank_of[a];
      }
    }
  }
  return gain;
}

SuccessRate ComputeSuccessRate(const Ranking& before, const Ranking& after,
                               const TargetSpec& spec, int k) {
  SuccessRate result;
  int demoted = 0;
  for (int t : spec.targets) {
    if (before.rank_of[t] > k) ++result.targets_not_initially_top_k;
    if (after.rank_of[t] > k) ++demoted;
  }
  result.rate = static_cast<double>(demoted) / spec.targets.size();
  return result;
}

SuccessRate SuccessRateFromTopK(std::span<const int> top_k_before,
                                std::span<const int> top_k_after,
                                const TargetSpec& spec) {
  SuccessRate result;
  int demoted = 0;
  for (int t : spec.targets) {
    if (std::find(top_k_before.begin(), top_k_before.end(), t) ==
        top_k_before.end()) {
      ++result.targets_not_initially_top_k;
    }
    if (std::find(top_k_after.begin(), top_k_after.end(), t) ==
        top_k_after.end()) {
      ++demoted;
    }
  }
  result.rate = static_cast<double>(demoted) / spec.targets.size();
  return result;
}

AuditResult AuditPlan(const AttackPlan& plan, const TargetSpec& spec,
                      const ProtocolParams& params) {
  AuditResult audit;
  for (const Report& report : plan.reports) {
    for (int v = 0; v < params.d; ++v) {
      if (!Supports(report, v, params)) continue;
      ++audit.rhs;
      if (!spec.is_target[v]) ++audit.lhs;
    }
  }
  audit.ok = audit.lhs <= audit.rhs;
  return audit;
}

}  // namespace ldprank
