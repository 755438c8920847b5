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


// Server-side countermeasures: min-shift normalization, duplicate-itemset
// detection of fake OUE reports, and frequency recovery by fake-support
// subtraction followed by projection onto the scaled simplex.

#ifndef LDPRANK_DEFENSES_H_
#define LDPRANK_DEFENSES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldprank/protocols.h"

namespace ldprank {

enum class Defense { kNone, kNormalize, kDetect, kLdpRecover, kLdpRecoverStar };

absl::string_view DefenseName(Defense defense);
absl::StatusOr<Defense> ParseDefense(absl::string_view name);

// (f_v - min f) / sum_u (f_u - min f). All-equal input maps to uniform 1/d.
// Requires d >= 2.
absl::StatusOr<std::vector<double>> Normalize(std::span<const double> freqs);

struct DetectionConfig {
  int min_support_size = 3;
  int64_t count_threshold = 20;
};

// Groups OUE reports by their exact set of one-bits and flags every report
// in a group whose set has at least min_support_size items and whose size
// exceeds count_threshold. Returns ascending report indices; reports of
// other protocols are never flagged.
std::vector<size_t> DetectFakeOue(std::span<const Report> reports,
                                  const DetectionConfig& config);

struct RecoverConfig {
  int64_t known_m = 0;
  // Exact target set; when absent, items whose poisoned estimate is <= 0
  // are presumed to be the targets.
  std::optional<std::vector<int>> known_targets;
  // Items supported by one fake report on average.
  double per_fake_support = 1;
};

// 1 for kRR, round(E_1) for OUE, round(E_1 / 2) for OLH.
double DefaultPerFakeSupport(const ProtocolParams& params);

// Euclidean projection of v onto {x >= 0, sum x = mass}, mass >= 0.
std::vector<double> ProjectOntoSimplex(std::span<const double> v, double mass);

// Recovers genuine counts from per-item supports of total_reports reports,
// of which config.known_m are presumed fake. Presumed targets are debiased
// plainly; presumed non-targets additionally lose per_fake_support * m / |D1|
// supports each. The result is projected to non-negative counts summing to
// total_reports - known_m. Fails when no item is presumed a non-target.
absl::StatusOr<std::vector<double>> LdpRecover(std::span<const int64_t> support,
                                               int64_t total_reports,
                                               const ProtocolParams& params,
                                               const RecoverConfig& config);

// LdpRecover with the target set taken from config.known_targets, which
// must be present.
absl::StatusOr<std::vector<double>> LdpRecoverStar(
    std::span<const int64_t> support, int64_t total_reports,
    const ProtocolParams& params, const RecoverConfig& config);

}  // namespace ldprank

#endif  // LDPRANK_DEFENSES_H_
