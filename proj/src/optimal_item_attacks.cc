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


#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "greedy_engine.h"
#include "ldprank/attacks.h"

namespace ldprank {
namespace {

absl::Status RequireProtocol(const AttackContext& ctx, Protocol protocol) {
  if (ctx.params.protocol != protocol) {
    return absl::InvalidArgumentError(
        absl::StrCat("context protocol is ", ProtocolName(ctx.params.protocol),
                     ", expected ", ProtocolName(protocol)));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<AttackPlan> OiaKrr(const AttackContext& ctx) {
  if (absl::Status s = RequireProtocol(ctx, Protocol::kKrr); !s.ok()) return s;
  return internal::RunGreedyKrr(ctx, {}, nullptr);
}

absl::StatusOr<AttackPlan> OiaOue(const AttackContext& ctx, Rng& rng) {
  if (absl::Status s = RequireProtocol(ctx, Protocol::kOue); !s.ok()) return s;
  return internal::RunGreedyOue(ctx, {}, rng);
}

absl::StatusOr<AttackPlan> OiaOlh(const AttackContext& ctx, Rng& rng) {
  if (absl::Status s = RequireProtocol(ctx, Protocol::kOlh); !s.ok()) return s;
  return internal::RunGreedyOlh(ctx, {}, rng);
}

absl::StatusOr<AttackPlan> OiaPlan(const AttackContext& ctx, Rng& rng) {
  return internal::RunGreedy(ctx, {}, rng);
}

absl::StatusOr<AttackPlan> MpoiaPlan(const AttackContext& ctx,
                                     const ConfidenceConfig& confidence,
                                     Rng& rng) {
  if (!(confidence.level >= 0.5 && confidence.level <= 0.99)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "confidence level must lie in [0.5, 0.99], got ", confidence.level));
  }
  internal::GreedyOptions options;
  options.z = confidence.z_alpha;
  return internal::RunGreedy(ctx, options, rng);
}

}  // namespace ldprank
