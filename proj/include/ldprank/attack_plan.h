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


#ifndef LDPRANK_ATTACK_PLAN_H_
#define LDPRANK_ATTACK_PLAN_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "ldprank/protocols.h"

namespace ldprank {

// Fake reports produced by an attack, with the allocation bookkeeping that
// generated them. Reports are sent verbatim (output poisoning) except for
// the input-poisoning baseline, whose reports were perturbed honestly.
struct AttackPlan {
  std::vector<Report> reports;
  // kRR: fake users per item. Other protocols: fake support per item.
  std::vector<int64_t> per_item_alloc;
  // OLH only: <(candidate seed, hash value), users> in allocation order.
  std::vector<std::pair<std::pair<uint64_t, int>, int64_t>> olh_alloc;
  // Number of allocation rounds x and the users committed in each round.
  int rounds = 0;
  std::vector<int64_t> per_round_costs;
};

}  // namespace ldprank

#endif  // LDPRANK_ATTACK_PLAN_H_
