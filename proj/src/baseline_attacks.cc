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

#include "absl/status/status.h"
#include "greedy_engine.h"
#include "ldprank/attacks.h"

namespace ldprank {
namespace {

absl::StatusOr<std::vector<int>> PushingRole(const AttackContext& ctx) {
  if (ctx.m < 0) return absl::InvalidArgumentError("negative fake-user count");
  if (ctx.params.d != ctx.spec.d) {
    return absl::InvalidArgumentError("params and targets disagree on d");
  }
  std::vector<int> role = internal::RoleItems(ctx);
  if (role.empty()) {
    return absl::FailedPreconditionError(
        ctx.spec.direction == Direction::kLower ? "no non-target items"
                                                : "no target items");
  }
  return role;
}

// Adds the support of `report` to plan.per_item_alloc, hashing OLH items
// through ctx.item_keys.
void Tally(const AttackContext& ctx, const Report& report, AttackPlan& plan) {
  if (const auto* olh = std::get_if<OlhReport>(&report)) {
    for (int v = 0; v < ctx.spec.d; ++v) {
      plan.per_item_alloc[v] +=
          static_cast<int>(HashEval(olh->seed, internal::ItemKey(ctx, v),
                                    ctx.params.dprime)) == olh->hash_value;
    }
    return;
  }
  AccumulateSupport(report, ctx.params, plan.per_item_alloc);
}

int UniformIndex(size_t size, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(size) - 1);
  return pick(rng);
}

}  // namespace

absl::StatusOr<AttackPlan> RiaPlan(const AttackContext& ctx, Rng& rng) {
  absl::StatusOr<std::vector<int>> role = PushingRole(ctx);
  if (!role.ok()) return role.status();
  AttackPlan plan;
  plan.per_item_alloc.assign(ctx.spec.d, 0);
  plan.reports.reserve(ctx.m);
  const ProtocolParams& params = ctx.params;
  for (int64_t u = 0; u < ctx.m; ++u) {
    const int item = (*role)[UniformIndex(role->size(), rng)];
    Report report;
    if (params.protocol == Protocol::kOlh) {
      OlhReport olh;
      olh.seed = rng();
      const int h = static_cast<int>(
          HashEval(olh.seed, internal::ItemKey(ctx, item), params.dprime));
      std::bernoulli_distribution keep(params.p);
      if (keep(rng)) {
        olh.hash_value = h;
      } else {
        std::uniform_int_distribution<int> other(0, params.dprime - 2);
        const int x = other(rng);
        olh.hash_value = x >= h ? x + 1 : x;
      }
      report = olh;
    } else {
      absl::StatusOr<Report> perturbed = Perturb(item, params, rng);
      if (!perturbed.ok()) return perturbed.status();
      report = *std::move(perturbed);
    }
    Tally(ctx, report, plan);
    plan.reports.push_back(std::move(report));
  }
  return plan;
}

absl::StatusOr<AttackPlan> RoaPlan(const AttackContext& ctx, Rng& rng) {
  absl::StatusOr<std::vector<int>> role = PushingRole(ctx);
  if (!role.ok()) return role.status();
  const ProtocolParams& params = ctx.params;
  const int d = ctx.spec.d;
  AttackPlan plan;
  plan.per_item_alloc.assign(d, 0);
  plan.reports.reserve(ctx.m);
  switch (params.protocol) {
    case Protocol::kKrr:
      for (int64_t u = 0; u < ctx.m; ++u) {
        const int item = (*role)[UniformIndex(role->size(), rng)];
        plan.reports.push_back(KrrReport{item});
        ++plan.per_item_alloc[item];
      }
      break;
    case Protocol::kOue: {
      const int ones = StealthOnes(params);
      std::vector<int> others;
      for (int v = 0; v < d; ++v) {
        if (std::find(role->begin(), role->end(), v) == role->end()) {
          others.push_back(v);
        }
      }
      for (int64_t u = 0; u < ctx.m; ++u) {
        OueReport row;
        row.bits.assign(d, false);
        std::vector<int> pool = *role;
        std::shuffle(pool.begin(), pool.end(), rng);
        const int from_role = std::min<int>(ones, static_cast<int>(pool.size()));
        for (int i = 0; i < from_role; ++i) row.bits[pool[i]] = true;
        if (from_role < ones) {
          std::vector<int> rest = others;
          std::shuffle(rest.begin(), rest.end(), rng);
          for (int i = 0; i < ones - from_role; ++i) row.bits[rest[i]] = true;
        }
        Tally(ctx, row, plan);
        plan.reports.push_back(std::move(row));
      }
      break;
    }
    case Protocol::kOlh: {
      if (ctx.num_candidate_seeds < 1) {
        return absl::InvalidArgumentError("candidate seed pool must be non-empty");
      }
      std::vector<uint64_t> seeds(ctx.num_candidate_seeds);
      for (uint64_t& s : seeds) s = rng();
      for (int64_t u = 0; u < ctx.m; ++u) {
        const int item = (*role)[UniformIndex(role->size(), rng)];
        const uint64_t seed = seeds[UniformIndex(seeds.size(), rng)];
        const OlhReport report{
            seed, static_cast<int>(HashEval(seed, internal::ItemKey(ctx, item),
                                            params.dprime))};
        Tally(ctx, report, plan);
        plan.reports.push_back(report);
      }
      break;
    }
  }
  return plan;
}

}  // namespace ldprank
