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
#include <functional>

#include "absl/status/status.h"
#include "greedy_engine.h"
#include "ldprank/attacks.h"

namespace ldprank {
namespace {

absl::Status CheckKrr(const AttackContext& ctx) {
  if (ctx.params.protocol != Protocol::kKrr) {
    return absl::InvalidArgumentError("allocation search is defined for kRR");
  }
  if (ctx.params.d != ctx.spec.d) {
    return absl::InvalidArgumentError("params and targets disagree on d");
  }
  if (ctx.m < 0) return absl::InvalidArgumentError("negative fake-user count");
  return absl::OkStatus();
}

// Expected supports on the attacker's scale, minus the common n * q offset.
class ExpectedBoard {
 public:
  ExpectedBoard(const std::vector<double>& counts, double scale)
      : base_(counts.size()), fake_(counts.size(), 0) {
    for (size_t v = 0; v < counts.size(); ++v) base_[v] = scale * counts[v];
  }

  int d() const { return static_cast<int>(base_.size()); }
  double Value(int v, int64_t extra = 0) const {
    return base_[v] + static_cast<double>(fake_[v] + extra);
  }
  // Ranking order: higher value first, lower index on ties.
  bool Above(int a, int64_t extra, int b) const {
    const double va = Value(a, extra);
    const double vb = Value(b);
    return va > vb || (va == vb && a < b);
  }
  // Fewest extra users for a to rank above b.
  int64_t MinOvertake(int a, int b) const {
    int64_t u = std::max<int64_t>(
        0, static_cast<int64_t>(std::ceil(Value(b) - Value(a))));
    while (!Above(a, u, b)) ++u;
    while (u > 0 && Above(a, u - 1, b)) --u;
    return u;
  }
  void Add(int v, int64_t amount) { fake_[v] += amount; }
  const std::vector<int64_t>& fake() const { return fake_; }
  std::vector<double> Values() const {
    std::vector<double> values(base_.size());
    for (int v = 0; v < d(); ++v) values[v] = Value(v);
    return values;
  }

 private:
  std::vector<double> base_;
  std::vector<int64_t> fake_;
};

}  // namespace

absl::StatusOr<AttackPlan> ExactValueAllocation(const AttackContext& ctx) {
  if (absl::Status s = CheckKrr(ctx); !s.ok()) return s;
  if (ctx.spec.direction != Direction::kLower) {
    return absl::InvalidArgumentError("value-based allocation supports lowering only");
  }
  if (ctx.spec.nontargets.empty()) {
    return absl::FailedPreconditionError("no non-target items");
  }
  absl::StatusOr<std::vector<double>> counts = BelievedCounts(ctx);
  if (!counts.ok()) return counts.status();
  ExpectedBoard board(*counts, ctx.params.p - ctx.params.q);
  const TargetSpec& spec = ctx.spec;
  AttackPlan plan;
  int64_t left = ctx.m;

  while (left > 0) {
    const Ranking ranking = Rank(board.Values());
    const std::vector<int>& order = ranking.order;
    // Walk the ranking top-down. Each non-target that directly follows a run
    // of targets is a candidate for exactly that run.
    int best_item = -1;
    int64_t best_users = 0;
    int best_count = 0;
    std::vector<int> run;  // Targets since the previous candidate.
    for (int pos = 0; pos < board.d(); ++pos) {
      const int v = order[pos];
      if (spec.is_target[v]) {
        run.push_back(v);
        continue;
      }
      if (pos == 0 || !spec.is_target[order[pos - 1]]) continue;
      // run holds targets top-down; overtake them nearest first.
      int64_t users = 0;
      for (int l = 1; l <= static_cast<int>(run.size()); ++l) {
        users = board.MinOvertake(v, run[run.size() - l]);
        if (users > left) break;
        // l / users > best_count / best_users, ties keep the earlier choice.
        if (best_item < 0 || l * best_users > best_count * users) {
          best_item = v;
          best_users = users;
          best_count = l;
        }
      }
      run.clear();
    }
    if (best_item < 0) break;
    board.Add(best_item, best_users);
    plan.reports.insert(plan.reports.end(), best_users, KrrReport{best_item});
    ++plan.rounds;
    plan.per_round_costs.push_back(best_users);
    left -= best_users;
  }
  for (int64_t u = 0; u < left; ++u) {
    const int item = spec.nontargets[u % spec.nontargets.size()];
    board.Add(item, 1);
    plan.reports.push_back(KrrReport{item});
  }
  plan.per_item_alloc = board.fake();
  return plan;
}

absl::StatusOr<BruteForceResult> BruteForceOptimal(const AttackContext& ctx) {
  if (absl::Status s = CheckKrr(ctx); !s.ok()) return s;
  if (ctx.spec.d > 10 || ctx.m > 8) {
    return absl::InvalidArgumentError("instance too large for exhaustive search");
  }
  const std::vector<int> role = internal::RoleItems(ctx);
  if (role.empty()) return absl::FailedPreconditionError("no items to allocate to");
  const int d = ctx.spec.d;

  BruteForceResult result;
  AttackPlan candidate;
  candidate.per_item_alloc.assign(d, 0);
  bool have_best = false;
  absl::Status failure = absl::OkStatus();
  std::function<void(size_t, int64_t)> recurse = [&](size_t i, int64_t left) {
    if (!failure.ok()) return;
    if (i + 1 == role.size()) {
      candidate.per_item_alloc[role[i]] = left;
      absl::StatusOr<int64_t> gain = ExpectedGain(ctx, candidate);
      if (!gain.ok()) {
        failure = gain.status();
        return;
      }
      if (!have_best || *gain > result.best_gain) {
        have_best = true;
        result.best_gain = *gain;
        result.best_plan.per_item_alloc = candidate.per_item_alloc;
      }
      candidate.per_item_alloc[role[i]] = 0;
      return;
    }
    for (int64_t take = 0; take <= left; ++take) {
      candidate.per_item_alloc[role[i]] = take;
      recurse(i + 1, left - take);
    }
    candidate.per_item_alloc[role[i]] = 0;
  };
  recurse(0, ctx.m);
  if (!failure.ok()) return failure;
  for (int v = 0; v < d; ++v) {
    result.best_plan.reports.insert(result.best_plan.reports.end(),
                                    result.best_plan.per_item_alloc[v],
                                    KrrReport{v});
  }
  return result;
}

}  // namespace ldprank
