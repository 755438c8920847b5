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


// Shared greedy machinery behind OIA, MPOIA, RK and NF.
//
// Items split into a pushing role (those that may receive fake support) and
// an opposing role (those to be overtaken). Each pusher keeps the opposing
// items believed to rank above it, strongest first; its cost is the number
// of fake supports still needed to pass the weakest of them:
//
//   cost(a) = min { u >= 1 : (p - q) c_a + F_a + u ranks above
//                            (p - q) c_b + F_b + z * SE(a, b) },
//
// where c are believed counts, F is fake support granted so far and equal
// values rank the lower index first. This is ceil of the scaled gap, plus one
// on an exact tie lost by index. Once a pusher already ranks above b the
// superior is dropped and the next one is considered.

#ifndef LDPRANK_SRC_GREEDY_ENGINE_H_
#define LDPRANK_SRC_GREEDY_ENGINE_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "ldprank/attack_plan.h"
#include "ldprank/attacks.h"
#include "ldprank/rng.h"

namespace ldprank {
namespace internal {

struct GreedyOptions {
  double z = 0;
  // Break equal costs uniformly at random instead of by lowest index.
  bool random_ties = false;
};

class OvertakeState {
 public:
  // Fails when the pushing role is empty.
  static absl::StatusOr<OvertakeState> Create(const AttackContext& ctx,
                                              double z);

  int d() const { return static_cast<int>(counts_.size()); }
  // Pushing-role items, ascending index.
  const std::vector<int>& pushers() const { return pushers_; }
  bool is_pusher(int v) const { return is_pusher_[v]; }
  bool is_blocker(int v) const { return is_blocker_[v]; }
  const std::vector<double>& counts() const { return counts_; }
  double scale() const { return scale_; }

  // Current cost of v; kInfiniteCost for non-pushers and pushers that have
  // passed every superior.
  double Cost(int v);
  void AddSupport(int v, int64_t amount);
  std::vector<int64_t> Support() const { return support_; }
  // Remaining superiors of v, strongest first.
  const std::vector<int>& superiors(int v) const { return superiors_[v]; }
  // Items that may absorb surplus support without costing gain: pushers
  // with no superior left and neutral items first, then opposing items
  // believed to rank below every pusher.
  std::vector<std::vector<int>> PaddingTiers();

 private:
  OvertakeState() = default;
  // Expected perturbed support of v with `extra` more fake users.
  double Value(int v, int64_t extra) const;
  // Confidence margin z * sqrt(Var_a + Var_b); zero when z = 0.
  double Margin(int a, int b) const;
  // Whether a, given `extra` more users, ranks above b plus the margin.
  bool Overtakes(int a, int64_t extra, int b) const;

  std::vector<double> counts_;
  std::vector<double> variance_;
  double scale_ = 0;
  double z_ = 0;
  std::vector<bool> is_pusher_;
  std::vector<bool> is_blocker_;
  std::vector<int> pushers_;
  std::vector<int> believed_rank_;
  std::vector<std::vector<int>> superiors_;
  std::vector<int64_t> support_;
};

absl::StatusOr<AttackPlan> RunGreedyKrr(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng* rng);
absl::StatusOr<AttackPlan> RunGreedyOue(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng& rng);
absl::StatusOr<AttackPlan> RunGreedyOlh(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng& rng);
absl::StatusOr<AttackPlan> RunGreedy(const AttackContext& ctx,
                                     const GreedyOptions& options, Rng& rng);

// Pushing-role items of ctx (non-targets when lowering, targets when
// elevating), ignoring ctx.pusher_pool.
std::vector<int> RoleItems(const AttackContext& ctx);

// Hash key of item v under ctx.item_keys.
inline uint64_t ItemKey(const AttackContext& ctx, int v) {
  return ctx.item_keys.empty() ? static_cast<uint64_t>(v) : ctx.item_keys[v];
}

}  // namespace internal
}  // namespace ldprank

#endif  // LDPRANK_SRC_GREEDY_ENGINE_H_
