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


#include <random>

#include "absl/status/status.h"
#include "greedy_engine.h"
#include "ldprank/attacks.h"

namespace ldprank {

absl::StatusOr<AttackPlan> RkPlan(const AttackContext& ctx, Rng& rng) {
  if (!std::holds_alternative<RankOnly>(ctx.knowledge)) {
    return absl::InvalidArgumentError("RK needs rank-only knowledge");
  }
  internal::GreedyOptions options;
  options.random_ties = true;
  return internal::RunGreedy(ctx, options, rng);
}

absl::StatusOr<AttackPlan> NfPlan(const AttackContext& ctx, Rng& rng) {
  if (!std::holds_alternative<NoisyCounts>(ctx.knowledge)) {
    return absl::InvalidArgumentError("NF needs noisy-count knowledge");
  }
  return internal::RunGreedy(ctx, {}, rng);
}

absl::StatusOr<NoisyCounts> EstimateNoisyCounts(
    std::span<const int64_t> true_counts, Protocol protocol, double epsilon_prime,
    double rho, Rng& rng) {
  if (!(rho > 0 && rho <= 1)) {
    return absl::InvalidArgumentError("sampling ratio must lie in (0, 1]");
  }
  absl::StatusOr<ProtocolParams> params = MakeParams(
      protocol, static_cast<int>(true_counts.size()), epsilon_prime);
  if (!params.ok()) return params.status();
  std::vector<int64_t> sampled(true_counts.size());
  int64_t total = 0;
  int64_t sampled_total = 0;
  for (size_t v = 0; v < true_counts.size(); ++v) {
    total += true_counts[v];
    if (rho == 1) {
      sampled[v] = true_counts[v];
    } else {
      std::binomial_distribution<int64_t> keep(true_counts[v], rho);
      sampled[v] = keep(rng);
    }
    sampled_total += sampled[v];
  }
  if (sampled_total == 0) {
    return absl::FailedPreconditionError("sample contains no users");
  }
  const std::vector<int64_t> support = SimulateSupportCounts(sampled, *params, rng);
  FrequencyEstimate estimate = EstimateFromSupport(support, sampled_total, *params);
  const double rescale = static_cast<double>(total) / sampled_total;
  NoisyCounts noisy;
  noisy.epsilon_prime = epsilon_prime;
  noisy.rho = rho;
  noisy.estimates = std::move(estimate.values);
  for (double& e : noisy.estimates) e *= rescale;
  return noisy;
}

}  // namespace ldprank
