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


// Fake-report generation against pure-LDP frequency oracles.
//
// Baselines pick non-target items at random (input or output poisoning).
// The optimal item attack (OIA) repeatedly spends the fewest fake users
// needed for some non-target to overtake the weakest target ranked above it,
// using expected perturbed supports. Its confidence-interval variant (MPOIA)
// adds z * SE to every cost. Limited-knowledge variants run the same
// machinery on estimated counts.
//
// In elevate mode the roles are mirrored: targets receive the fake support
// and must overtake the non-targets ranked above them.

#ifndef LDPRANK_ATTACKS_H_
#define LDPRANK_ATTACKS_H_

#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldprank/attack_plan.h"
#include "ldprank/protocols.h"
#include "ldprank/ranking.h"
#include "ldprank/rng.h"

namespace ldprank {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

// Attacker knowledge of the genuine population.
struct ExactCounts {
  std::vector<double> counts;
};
struct NoisyCounts {
  std::vector<double> estimates;
  double epsilon_prime = 0;
  double rho = 1;
};
struct RankOnly {
  // order[i] is the item believed to hold rank i + 1.
  std::vector<int> order;
  double f_min = 0;
  double f_max = 0;
};
using Knowledge = std::variant<ExactCounts, NoisyCounts, RankOnly>;

struct AttackContext {
  Knowledge knowledge;
  ProtocolParams params;
  TargetSpec spec;
  int64_t n = 0;  // Genuine users.
  int64_t m = 0;  // Fake users.
  // Size n_H of the sampled OLH seed pool.
  int num_candidate_seeds = 100;
  // When non-empty, only these items may receive deliberate fake support.
  std::vector<int> pusher_pool;
  // When non-empty, OLH hashes item v as item_keys[v] instead of v.
  std::vector<uint64_t> item_keys;
};

enum class AttackStrategy { kRia, kRoa, kOia, kMpoia, kRk, kNf };

absl::string_view AttackName(AttackStrategy strategy);
absl::StatusOr<AttackStrategy> ParseAttack(absl::string_view name);

// Counts the attacker believes in; RankOnly knowledge is expanded with
// LinearRankFrequencies.
absl::StatusOr<std::vector<double>> BelievedCounts(const AttackContext& ctx);

// E[n'_v] = n q + n_v (p - q) over the believed counts.
absl::StatusOr<std::vector<double>> ExpectedPerturbed(const AttackContext& ctx);

struct EffectiveAttackState {
  // Items that can still overtake someone, by descending believed count.
  std::vector<int> effective;
  // Remaining items of the pushing role.
  std::vector<int> ineffective;
  // superiors[v]: opposing items ranked above v, strongest first. Empty for
  // items outside the pushing role.
  std::vector<std::vector<int>> superiors;
  // Fake users needed for v to overtake superiors[v].back(), rounded up;
  // kInfiniteCost for ineffective items.
  std::vector<double> cost;
};

// An empty `effective` set is not an error; attacks then only pad.
absl::StatusOr<EffectiveAttackState> BuildState(const AttackContext& ctx);

struct ConfidenceConfig {
  double level = 0.5;
  // One-sided standard normal quantile at `level`; zero at 0.5.
  double z_alpha = 0;
};

absl::StatusOr<ConfidenceConfig> MakeConfidence(double level);

// C = 1 / sum(1 / cost). Infinite costs contribute nothing; an empty or
// all-infinite input scores kInfiniteCost.
double HarmonicScore(std::span<const double> costs);

// f_i = f_max - (i - 1)(f_max - f_min)/(d - 1), indexed by rank - 1.
absl::StatusOr<std::vector<double>> LinearRankFrequencies(int d, double f_min,
                                                          double f_max);

// Random input attack: uniform pushing-role item, perturbed honestly.
absl::StatusOr<AttackPlan> RiaPlan(const AttackContext& ctx, Rng& rng);

// Random output attack: uniform pushing-role item reported verbatim. OUE rows
// carry StealthOnes() one-bits; OLH draws its seed from the candidate pool.
absl::StatusOr<AttackPlan> RoaPlan(const AttackContext& ctx, Rng& rng);

absl::StatusOr<AttackPlan> OiaKrr(const AttackContext& ctx);
absl::StatusOr<AttackPlan> OiaOue(const AttackContext& ctx, Rng& rng);
absl::StatusOr<AttackPlan> OiaOlh(const AttackContext& ctx, Rng& rng);
// Dispatches on ctx.params.protocol.
absl::StatusOr<AttackPlan> OiaPlan(const AttackContext& ctx, Rng& rng);

// OIA with costs ceil(E[n'_b] - E[n'_a] + z * SE). Requires level in
// [0.5, 0.99]. At level 0.5 the plan equals OiaPlan under the same rng.
absl::StatusOr<AttackPlan> MpoiaPlan(const AttackContext& ctx,
                                     const ConfidenceConfig& confidence,
                                     Rng& rng);

// OIA over linearly interpolated counts; equal-cost candidates are chosen
// uniformly at random. Requires RankOnly knowledge.
absl::StatusOr<AttackPlan> RkPlan(const AttackContext& ctx, Rng& rng);

// OIA over previously published noisy estimates. Requires NoisyCounts.
absl::StatusOr<AttackPlan> NfPlan(const AttackContext& ctx, Rng& rng);

// Runs one estimation round at epsilon_prime over a rho-sample of the
// population and rescales to the full population.
absl::StatusOr<NoisyCounts> EstimateNoisyCounts(
    std::span<const int64_t> true_counts, Protocol protocol, double epsilon_prime,
    double rho, Rng& rng);

// Value-based allocation for kRR in lower mode: per iteration, each target's
// nearest non-target below it is a candidate; its value is max_l l / U_l
// over the affordable cumulative overtaking costs U_l of the targets between
// it and the previous candidate.
absl::StatusOr<AttackPlan> ExactValueAllocation(const AttackContext& ctx);

struct BruteForceResult {
  AttackPlan best_plan;
  int64_t best_gain = 0;
};

// Exhaustive search over all kRR allocations of m users to pushing-role
// items, scored by ExpectedGain. Limited to d <= 10 and m <= 8.
absl::StatusOr<BruteForceResult> BruteForceOptimal(const AttackContext& ctx);

// Gain of a plan when genuine supports equal their expectations: rankings
// before and after adding plan.per_item_alloc to E[n'].
absl::StatusOr<int64_t> ExpectedGain(const AttackContext& ctx,
                                     const AttackPlan& plan);

}  // namespace ldprank

#endif  // LDPRANK_ATTACKS_H_
