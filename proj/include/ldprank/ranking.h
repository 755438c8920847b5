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


// Rankings derived from frequency vectors, the pairwise overall gain of a
// ranking attack, the heavy-hitter success rate and the budget audit for
// fake-report plans.

#ifndef LDPRANK_RANKING_H_
#define LDPRANK_RANKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ldprank/attack_plan.h"
#include "ldprank/protocols.h"

namespace ldprank {

enum class Direction { kLower, kElevate };

// Targets T and non-targets A partition [d]; T is non-empty.
struct TargetSpec {
  int d = 0;
  std::vector<int> targets;
  std::vector<int> nontargets;
  std::vector<bool> is_target;
  Direction direction = Direction::kLower;
};

absl::StatusOr<TargetSpec> MakeTargetSpec(int d, std::vector<int> targets,
                                          Direction direction);

// rank_of[v] is 1 for the most frequent item. Ties go to the lower index.
struct Ranking {
  std::vector<int> rank_of;
  // order[i] is the item at rank i + 1.
  std::vector<int> order;
  int RankOf(int item) const { return rank_of[item]; }
};

Ranking Rank(std::span<const double> freqs);

// Number of (non-target, target) pairs whose relative order flips in the
// attacker's favour: for kLower, a was below t and ends above it; for
// kElevate, t was below a and ends above it. Bounded by r * s.
absl::StatusOr<int64_t> OverallGain(const Ranking& before, const Ranking& after,
                                    const TargetSpec& spec);

struct SuccessRate {
  double rate = 0;
  // Targets that were not in the top-k to begin with; reported, not fatal.
  int targets_not_initially_top_k = 0;
};

// Fraction of targets ranked below k after the attack.
SuccessRate ComputeSuccessRate(const Ranking& before, const Ranking& after,
                               const TargetSpec& spec, int k);

// Same measure when only identified top-k sets are available.
SuccessRate SuccessRateFromTopK(std::span<const int> top_k_before,
                                std::span<const int> top_k_after,
                                const TargetSpec& spec);

struct AuditResult {
  int64_t lhs = 0;  // Sum over non-targets of |Alloc_a|.
  int64_t rhs = 0;  // Sum over fake reports of |S(y)|.
  bool ok = true;
};

// Budget constraint check: total non-target support cannot exceed the total
// support mass of the fake reports.
AuditResult AuditPlan(const AttackPlan& plan, const TargetSpec& spec,
                      const ProtocolParams& params);

struct GainReport {
  Ranking before;
  Ranking after;
  int64_t gain = 0;
  double success_rate = 0;
  int rounds = 0;
  // Mean per-round success, gain / rounds when rounds > 0.
  double per_round_success = 0;
};

}  // namespace ldprank

#endif  // LDPRANK_RANKING_H_
