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


// Prefix-extending heavy-hitter identification over OLH, and its poisoning.
//
// Items are gamma-bit strings (their index in binary). Users are split into g
// balanced groups; group j reports the lambda_j-bit prefix of its item with
// OLH, and the aggregator keeps the k best prefixes among extensions of the
// previous round's survivors.

#ifndef LDPRANK_HEAVY_HITTER_H_
#define LDPRANK_HEAVY_HITTER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "ldprank/attacks.h"
#include "ldprank/data.h"
#include "ldprank/ranking.h"
#include "ldprank/rng.h"

namespace ldprank {

struct PemConfig {
  int gamma = 0;  // Bits per item; 2^gamma >= d.
  int g = 10;     // Groups, one per round.
  int k = 20;     // Heavy hitters to identify.
};

// gamma defaults to ceil(log2 d).
absl::StatusOr<PemConfig> MakePemConfig(int d, int g, int k,
                                        std::optional<int> gamma = std::nullopt);

// Checks the config against a domain of size d, including k <= 2^lambda_1.
absl::Status ValidatePemConfig(const PemConfig& config, int d);

// lambda_j = ceil(log2 k) + ceil(j (gamma - ceil(log2 k)) / g), j in [0, g].
int PrefixLength(const PemConfig& config, int j);

struct PemResult {
  // Identified heavy hitters, most frequent estimate first.
  std::vector<int> identified;
  // Surviving prefixes after each round.
  std::vector<std::vector<uint64_t>> round_prefixes;
};

absl::StatusOr<PemResult> PemIdentify(const Dataset& dataset,
                                      const PemConfig& config, double epsilon,
                                      Rng& rng);

struct PemAttackResult {
  std::vector<int> identified;
  double success_rate = 0;
  int targets_not_initially_top_k = 0;
  std::vector<int64_t> fake_per_group;
};

// Runs PEM with m fake users split evenly (at random) across groups. In each
// round the fakes attack the current candidate prefixes, treating the
// target items' prefixes as targets. OIA may only push the x + r most
// frequent effective candidates, x being those already in the top k.
// Supported strategies: RIA, ROA, OIA. `spec` must be in lower mode.
absl::StatusOr<PemAttackResult> PemAttack(const Dataset& dataset,
                                          const PemConfig& config,
                                          double epsilon,
                                          AttackStrategy strategy, int64_t m,
                                          const TargetSpec& spec, Rng& rng);

}  // namespace ldprank

#endif  // LDPRANK_HEAVY_HITTER_H_
