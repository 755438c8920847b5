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

// Pure-LDP frequency oracles: k-ary randomized response (kRR), optimized
// unary encoding (OUE) and optimized local hashing (OLH).
//
// Every protocol is described by a pair (p, q): a report supports the user's
// true item with probability p and any other fixed item with probability q.
// The aggregator counts supports and debiases them with
//
//   n~_v = (support_v - N * q) / (p - q).
//
// Items are 0-indexed.

#ifndef LDPRANK_PROTOCOLS_H_
#define LDPRANK_PROTOCOLS_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldprank/rng.h"

namespace ldprank {

enum class Protocol { kKrr, kOue, kOlh };

absl::string_view ProtocolName(Protocol protocol);
absl::StatusOr<Protocol> ParseProtocol(absl::string_view name);

struct ProtocolParams {
  Protocol protocol = Protocol::kKrr;
  int d = 0;
  double epsilon = 0;
  double p = 0;
  double q = 0;
  // OLH hash range size d'; zero for the other protocols.
  int dprime = 0;
};

// Closed-form (p, q) for the three protocols. OLH uses d' = round(e^eps) + 1.
// Fails when d < 2 or epsilon <= 0.
absl::StatusOr<ProtocolParams> MakeParams(Protocol protocol, int d,
                                          double epsilon);

// Seeded OLH hash H_seed(item) in [0, dprime). XXH64 over the little-endian
// 64-bit item id, reduced modulo dprime. Attackers and the aggregator share
// this function, so their support sets agree.
uint32_t HashEval(uint64_t seed, uint64_t item, int dprime);

struct KrrReport {
  int item = 0;
  friend auto operator<=>(const KrrReport&, const KrrReport&) = default;
};

struct OueReport {
  std::vector<bool> bits;
  friend auto operator<=>(const OueReport&, const OueReport&) = default;
};

struct OlhReport {
  uint64_t seed = 0;
  int hash_value = 0;
  friend auto operator<=>(const OlhReport&, const OlhReport&) = default;
};

using Report = std::variant<KrrReport, OueReport, OlhReport>;

struct FrequencyEstimate {
  // Estimated counts n~_v; may be negative.
  std::vector<double> values;
};

// Encodes and perturbs one user's item.
absl::StatusOr<Report> Perturb(int item, const ProtocolParams& params, Rng& rng);

// Support-set membership: item in S(report).
bool Supports(const Report& report, int item, const ProtocolParams& params);

// |S(report)| over the domain [d].
int SupportSize(const Report& report, const ProtocolParams& params);

// Adds one to support[v] for every v in S(report). support.size() == d.
void AccumulateSupport(const Report& report, const ProtocolParams& params,
                       std::span<int64_t> support);

// Checks that the report belongs to params.protocol and is in range.
absl::Status ValidateReport(const Report& report, const ProtocolParams& params);

// Debiased estimate from per-item support counts of `num_reports` reports.
FrequencyEstimate EstimateFromSupport(std::span<const int64_t> support,
                                      int64_t num_reports,
                                      const ProtocolParams& params);

// Full aggregation. Errors on an empty report set and on reports that do not
// match params.protocol.
absl::StatusOr<FrequencyEstimate> Aggregate(std::span<const Report> reports,
                                            const ProtocolParams& params);

// Perturbs item_counts[v] users holding item v and returns their reports in
// item order.
std::vector<Report> PerturbPopulation(std::span<const int64_t> item_counts,
                                      const ProtocolParams& params, Rng& rng);

// Same distribution as aggregating PerturbPopulation, without materializing
// the reports.
std::vector<int64_t> SimulateSupportCounts(std::span<const int64_t> item_counts,
                                           const ProtocolParams& params,
                                           Rng& rng);

// E_1 = p + (d - 1) q: expected number of supported items per genuine report.
double ExpectedSupportSize(const ProtocolParams& params);

// round-half-up(E_1), at least 1. One-bits per OUE fake row.
int StealthOnes(const ProtocolParams& params);

// Var(n'_v) = n_v p (1 - p) + (N - n_v) q (1 - q).
double PerturbedVariance(double n_v, double total_users,
                         const ProtocolParams& params);

}  // namespace ldprank

#endif  // LDPRANK_PROTOCOLS_H_
