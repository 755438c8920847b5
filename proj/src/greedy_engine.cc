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


#include "greedy_engine.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "ldprank/protocols.h"
#include "ldprank/ranking.h"

namespace ldprank {
namespace internal {
namespace {

// Marks `need` more items as chosen, drawing uniformly within each tier in
// order and moving to the next tier only when the current one is exhausted.
void FillFromTiers(const std::vector<std::vector<int>>& tiers, int need,
                   std::vector<bool>& chosen, Rng& rng) {
  for (const auto& tier : tiers) {
    if (need <= 0) return;
    std::vector<int> open;
    for (int v : tier) {
      if (!chosen[v]) open.push_back(v);
    }
    if (static_cast<int>(open.size()) > need) {
      for (int i = 0; i < need; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(open.size()) - 1);
        std::swap(open[i], open[pick(rng)]);
      }
      open.resize(need);
    }
    for (int v : open) chosen[v] = true;
    need -= static_cast<int>(open.size());
  }
}

OueReport RowFromMask(const std::vector<bool>& mask) {
  OueReport row;
  row.bits = mask;
  return row;
}

void AddOueRows(const std::vector<bool>& mask, int64_t copies,
                OvertakeState& state, AttackPlan& plan) {
  for (int v = 0; v < state.d(); ++v) {
    if (mask[v]) state.AddSupport(v, copies);
  }
  const OueReport row = RowFromMask(mask);
  for (int64_t i = 0; i < copies; ++i) plan.reports.push_back(row);
}

// Index of the minimum finite entry of `values`, or -1. Equal values go to
// the first index, or to a uniform choice among them with random_ties.
template <typename Fn>
int ArgMin(int size, Fn&& value_of, bool random_ties, Rng* rng) {
  int best = -1;
  double best_value = kInfiniteCost;
  int ties = 0;
  for (int i = 0; i < size; ++i) {
    const double value = value_of(i);
    if (value == kInfiniteCost) continue;
    if (value < best_value) {
      best = i;
      best_value = value;
      ties = 1;
    } else if (value == best_value && random_ties) {
      ++ties;
      std::uniform_int_distribution<int> pick(0, ties - 1);
      if (pick(*rng) == 0) best = i;
    }
  }
  return best;
}

}  // namespace

std::vector<int> RoleItems(const AttackContext& ctx) {
  return ctx.spec.direction == Direction::kLower ? ctx.spec.nontargets
                                                 : ctx.spec.targets;
}

absl::StatusOr<OvertakeState> OvertakeState::Create(const AttackContext& ctx,
                                                    double z) {
  absl::StatusOr<std::vector<double>> counts = BelievedCounts(ctx);
  if (!counts.ok()) return counts.status();
  const int d = ctx.spec.d;
  if (static_cast<int>(counts->size()) != d || ctx.params.d != d) {
    return absl::InvalidArgumentError("knowledge, params and targets disagree on d");
  }
  if (ctx.m < 0) return absl::InvalidArgumentError("negative fake-user count");
  OvertakeState state;
  state.counts_ = *std::move(counts);
  state.scale_ = ctx.params.p - ctx.params.q;
  state.z_ = z;
  if (z != 0) {
    const double total = static_cast<double>(ctx.n + ctx.m);
    state.variance_.resize(d);
    for (int v = 0; v < d; ++v) {
      state.variance_[v] = PerturbedVariance(state.counts_[v], total, ctx.params);
    }
  }
  const bool lower = ctx.spec.direction == Direction::kLower;
  std::vector<bool> in_pool(d, ctx.pusher_pool.empty());
  for (int v : ctx.pusher_pool) {
    if (v < 0 || v >= d) return absl::OutOfRangeError("pusher pool item out of range");
    in_pool[v] = true;
  }
  state.is_pusher_.assign(d, false);
  state.is_blocker_.assign(d, false);
  for (int v = 0; v < d; ++v) {
    const bool pushing_role = ctx.spec.is_target[v] != lower;
    state.is_pusher_[v] = pushing_role && in_pool[v];
    state.is_blocker_[v] = !pushing_role;
    if (state.is_pusher_[v]) state.pushers_.push_back(v);
  }
  if (state.pushers_.empty()) {
    return absl::FailedPreconditionError("no items available to receive fake support");
  }
  const Ranking ranking = Rank(state.counts_);
  state.believed_rank_ = ranking.rank_of;
  state.superiors_.assign(d, {});
  std::vector<int> above;
  for (int v : ranking.order) {
    if (state.is_blocker_[v]) {
      above.push_back(v);
    } else if (state.is_pusher_[v]) {
      state.superiors_[v] = above;
    }
  }
  state.support_.assign(d, 0);
  return state;
}

double OvertakeState::Value(int v, int64_t extra) const {
  return scale_ * counts_[v] + static_cast<double>(support_[v] + extra);
}

double OvertakeState::Margin(int a, int b) const {
  return z_ == 0 ? 0.0 : z_ * std::sqrt(variance_[a] + variance_[b]);
}

bool OvertakeState::Overtakes(int a, int64_t extra, int b) const {
  // Same comparison as ranking expected frequencies: ties go to the lower
  // index.
  const double va = Value(a, extra);
  const double vb = Value(b, 0) + Margin(a, b);
  return va > vb || (va == vb && a < b);
}

double OvertakeState::Cost(int v) {
  if (!is_pusher_[v]) return kInfiniteCost;
  std::vector<int>& above = superiors_[v];
  while (!above.empty()) {
    const int b = above.back();
    if (Overtakes(v, 0, b)) {
      above.pop_back();
      continue;
    }
    // Smallest whole number of users that lifts v above b.
    int64_t users = std::max<int64_t>(
        1, static_cast<int64_t>(std::ceil(Value(b, 0) + Margin(v, b) - Value(v, 0))));
    while (!Overtakes(v, users, b)) ++users;
    while (users > 1 && Overtakes(v, users - 1, b)) --users;
    return static_cast<double>(users);
  }
  return kInfiniteCost;
}

void OvertakeState::AddSupport(int v, int64_t amount) { support_[v] += amount; }

std::vector<std::vector<int>> OvertakeState::PaddingTiers() {
  int lowest_pusher_rank = 0;
  for (int v : pushers_) lowest_pusher_rank = std::max(lowest_pusher_rank, believed_rank_[v]);
  std::vector<std::vector<int>> tiers(4);
  for (int v = 0; v < d(); ++v) {
    if (is_pusher_[v]) {
      tiers[Cost(v) == kInfiniteCost ? 0 : 2].push_back(v);
    } else if (!is_blocker_[v]) {
      tiers[0].push_back(v);
    } else {
      tiers[believed_rank_[v] > lowest_pusher_rank ? 1 : 3].push_back(v);
    }
  }
  return tiers;
}

absl::StatusOr<AttackPlan> RunGreedyKrr(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng* rng) {
  if (options.random_ties && rng == nullptr) {
    return absl::InvalidArgumentError("random tie-breaking needs a generator");
  }
  absl::StatusOr<OvertakeState> created = OvertakeState::Create(ctx, options.z);
  if (!created.ok()) return created.status();
  OvertakeState& state = *created;
  const std::vector<int>& pushers = state.pushers();
  AttackPlan plan;
  plan.reports.reserve(ctx.m);
  int64_t left = ctx.m;
  while (left > 0) {
    const int pick = ArgMin(
        static_cast<int>(pushers.size()),
        [&](int i) { return state.Cost(pushers[i]); }, options.random_ties, rng);
    if (pick < 0) break;
    const int item = pushers[pick];
    const int64_t alloc =
        std::min(static_cast<int64_t>(state.Cost(item)), left);
    state.AddSupport(item, alloc);
    plan.reports.insert(plan.reports.end(), alloc, KrrReport{item});
    ++plan.rounds;
    plan.per_round_costs.push_back(alloc);
    left -= alloc;
  }
  // Surplus users are spread round-robin over the pushing role.
  for (int64_t u = 0; u < left; ++u) {
    const int item = pushers[u % pushers.size()];
    state.AddSupport(item, 1);
    plan.reports.push_back(KrrReport{item});
  }
  plan.per_item_alloc = state.Support();
  return plan;
}

absl::StatusOr<AttackPlan> RunGreedyOue(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng& rng) {
  absl::StatusOr<OvertakeState> created = OvertakeState::Create(ctx, options.z);
  if (!created.ok()) return created.status();
  OvertakeState& state = *created;
  const int d = state.d();
  const int ones = StealthOnes(ctx.params);
  std::vector<int> effective;
  for (int v : state.pushers()) {
    if (state.Cost(v) != kInfiniteCost) effective.push_back(v);
  }
  const std::vector<std::vector<int>> tiers = state.PaddingTiers();
  AttackPlan plan;
  plan.reports.reserve(ctx.m);
  int64_t left = ctx.m;

  if (!effective.empty() && ones <= static_cast<int>(effective.size())) {
    std::vector<int> order = effective;
    std::vector<double> cost(d, kInfiniteCost);
    std::vector<uint64_t> tie_key(d, 0);
    while (left > 0) {
      for (int v : order) {
        cost[v] = state.Cost(v);
        if (options.random_ties) tie_key[v] = rng();
      }
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (cost[a] != cost[b]) return cost[a] < cost[b];
        if (tie_key[a] != tie_key[b]) return tie_key[a] < tie_key[b];
        return a < b;
      });
      if (cost[order[0]] == kInfiniteCost) break;
      const int64_t alloc = std::min(static_cast<int64_t>(cost[order[0]]), left);
      std::vector<bool> mask(d, false);
      for (int i = 0; i < ones; ++i) mask[order[i]] = true;
      AddOueRows(mask, alloc, state, plan);
      ++plan.rounds;
      plan.per_round_costs.push_back(alloc);
      left -= alloc;
    }
  } else if (!effective.empty()) {
    // Every row covers all effective items; the rest of its one-bits go to
    // items that cannot hurt the gain, drawn independently per row.
    for (int64_t u = 0; u < left; ++u) {
      std::vector<bool> mask(d, false);
      for (int v : effective) mask[v] = true;
      FillFromTiers(tiers, ones - static_cast<int>(effective.size()), mask, rng);
      AddOueRows(mask, 1, state, plan);
    }
    plan.rounds = left > 0 ? 1 : 0;
    if (left > 0) plan.per_round_costs.push_back(left);
    left = 0;
  }

  // Surplus rows: each draws its pushing-role items uniformly at random, so
  // padding spreads evenly in expectation without repeating one itemset.
  const std::vector<std::vector<int>> pusher_tier = {state.pushers()};
  const int window = std::min<int>(ones, static_cast<int>(state.pushers().size()));
  for (int64_t u = 0; u < left; ++u) {
    std::vector<bool> mask(d, false);
    FillFromTiers(pusher_tier, window, mask, rng);
    FillFromTiers(tiers, ones - window, mask, rng);
    AddOueRows(mask, 1, state, plan);
  }
  plan.per_item_alloc = state.Support();
  return plan;
}

absl::StatusOr<AttackPlan> RunGreedyOlh(const AttackContext& ctx,
                                        const GreedyOptions& options, Rng& rng) {
  if (ctx.num_candidate_seeds < 1) {
    return absl::InvalidArgumentError("candidate seed pool must be non-empty");
  }
  if (!ctx.item_keys.empty() && static_cast<int>(ctx.item_keys.size()) != ctx.spec.d) {
    return absl::InvalidArgumentError("item_keys length differs from d");
  }
  absl::StatusOr<OvertakeState> created = OvertakeState::Create(ctx, options.z);
  if (!created.ok()) return created.status();
  OvertakeState& state = *created;
  const int d = state.d();
  const int range = ctx.params.dprime;
  const int pool = ctx.num_candidate_seeds;
  const int num_pairs = pool * range;

  std::vector<uint64_t> seeds(pool);
  for (uint64_t& s : seeds) s = rng();
  std::vector<int> hash(static_cast<size_t>(pool) * d);
  std::vector<std::vector<int>> bucket(num_pairs);
  std::vector<bool> blocked(num_pairs, false);
  for (int i = 0; i < pool; ++i) {
    for (int v = 0; v < d; ++v) {
      const int h = static_cast<int>(HashEval(seeds[i], ItemKey(ctx, v), range));
      hash[static_cast<size_t>(i) * d + v] = h;
      bucket[i * range + h].push_back(v);
      if (state.is_blocker(v)) blocked[i * range + h] = true;
    }
  }

  std::vector<double> cost(d, kInfiniteCost);
  auto refresh_cost = [&](int v) { cost[v] = state.Cost(v); };
  for (int v : state.pushers()) refresh_cost(v);
  std::vector<double> score(num_pairs, kInfiniteCost);
  auto refresh_score = [&](int pair) {
    if (blocked[pair]) return;
    double inverse = 0;
    for (int v : bucket[pair]) {
      if (cost[v] != kInfiniteCost) inverse += 1.0 / cost[v];
    }
    score[pair] = inverse > 0 ? 1.0 / inverse : kInfiniteCost;
  };
  for (int pair = 0; pair < num_pairs; ++pair) refresh_score(pair);

  AttackPlan plan;
  plan.reports.reserve(ctx.m);
  int64_t left = ctx.m;
  std::vector<bool> dirty(num_pairs, false);
  std::vector<int> dirty_list;
  auto emit = [&](int pair, int64_t alloc) {
    const uint64_t seed = seeds[pair / range];
    const int h = pair % range;
    for (int v : bucket[pair]) state.AddSupport(v, alloc);
    if (!plan.olh_alloc.empty() && plan.olh_alloc.back().first ==
                                       std::make_pair(seed, h)) {
      plan.olh_alloc.back().second += alloc;
    } else {
      plan.olh_alloc.push_back({{seed, h}, alloc});
    }
    plan.reports.insert(plan.reports.end(), alloc, OlhReport{seed, h});
  };

  while (left > 0) {
    int best = ArgMin(num_pairs, [&](int pair) { return score[pair]; },
                      options.random_ties, &rng);
    bool fallback = false;
    double min_cost = kInfiniteCost;
    if (best >= 0) {
      for (int v : bucket[best]) min_cost = std::min(min_cost, cost[v]);
    } else {
      // Every scored pair is blocked: report the cheapest item's own bucket
      // under the first candidate seed.
      const std::vector<int>& pushers = state.pushers();
      const int pick = ArgMin(static_cast<int>(pushers.size()),
                              [&](int i) { return cost[pushers[i]]; },
                              options.random_ties, &rng);
      if (pick < 0) break;
      const int item = pushers[pick];
      best = hash[item];  // Seed index 0.
      min_cost = cost[item];
      fallback = true;
    }
    const int64_t alloc = std::min(static_cast<int64_t>(min_cost), left);
    emit(best, alloc);
    ++plan.rounds;
    plan.per_round_costs.push_back(alloc);
    left -= alloc;

    if (fallback) {
      for (int v : state.pushers()) refresh_cost(v);
      for (int pair = 0; pair < num_pairs; ++pair) refresh_score(pair);
      continue;
    }
    for (int v : bucket[best]) {
      if (!state.is_pusher(v)) continue;
      const double before = cost[v];
      refresh_cost(v);
      if (cost[v] == before) continue;
      for (int i = 0; i < pool; ++i) {
        const int pair = i * range + hash[static_cast<size_t>(i) * d + v];
        if (!dirty[pair]) {
          dirty[pair] = true;
          dirty_list.push_back(pair);
        }
      }
    }
    for (int pair : dirty_list) {
      refresh_score(pair);
      dirty[pair] = false;
    }
    dirty_list.clear();
  }

  // Surplus users: round-robin over the pushing role, each under the first
  // candidate seed whose bucket holds no opposing item.
  const std::vector<int>& pushers = state.pushers();
  for (int64_t u = 0; u < left; ++u) {
    const int item = pushers[u % pushers.size()];
    int chosen = hash[item];
    for (int i = 0; i < pool; ++i) {
      const int pair = i * range + hash[static_cast<size_t>(i) * d + item];
      if (!blocked[pair]) {
        chosen = pair;
        break;
      }
    }
    emit(chosen, 1);
  }
  plan.per_item_alloc = state.Support();
  return plan;
}

absl::StatusOr<AttackPlan> RunGreedy(const AttackContext& ctx,
                                     const GreedyOptions& options, Rng& rng) {
  switch (ctx.params.protocol) {
    case Protocol::kKrr:
      return RunGreedyKrr(ctx, options, &rng);
    case Protocol::kOue:
      return RunGreedyOue(ctx, options, rng);
    case Protocol::kOlh:
      return RunGreedyOlh(ctx, options, rng);
  }
  return absl::InternalError("unreachable");
}

}  // namespace internal
}  // namespace ldprank
