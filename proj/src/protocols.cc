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

#include "ldprank/protocols.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

#define XXH_INLINE_ALL
#include "xxhash.h"

namespace ldprank {
namespace {

// Uniform draw from [0, range) \ {excluded}.
int UniformOther(int range, int excluded, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, range - 2);
  int v = pick(rng);
  return v >= excluded ? v + 1 : v;
}

// Adds one to `support` at independent Bernoulli(prob) positions in [0, d)
// by geometric skipping, so the cost is proportional to the number of hits.
template <typename Fn>
void ForEachBernoulliHit(int d, double prob, Rng& rng, Fn&& fn) {
  if (prob <= 0) return;
  std::geometric_distribution<int64_t> gap(prob);
  int64_t pos = gap(rng);
  while (pos < d) {
    fn(static_cast<int>(pos));
    pos += 1 + gap(rng);
  }
}

}  // namespace

absl::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kKrr:
      return "krr";
    case Protocol::kOue:
      return "oue";
    case Protocol::kOlh:
      return "olh";
  }
  return "unknown";
}

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name) {
  std::string lower = absl::AsciiStrToLower(name);
  if (lower == "krr") return Protocol::kKrr;
  if (lower == "oue") return Protocol::kOue;
  if (lower == "olh") return Protocol::kOlh;
  return absl::InvalidArgumentError(absl::StrCat("unknown protocol: ", name));
}

absl::StatusOr<ProtocolParams> MakeParams(Protocol protocol, int d,
                                          double epsilon) {
  if (d < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain size too small: d=", d));
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  ProtocolParams params;
  params.protocol = protocol;
  params.d = d;
  params.epsilon = epsilon;
  const double e = std::exp(epsilon);
  switch (protocol) {
    case Protocol::kKrr:
      params.p = e / (e + d - 1);
      params.q = 1.0 / (e + d - 1);
      break;
    case Protocol::kOue:
      params.p = 0.5;
      params.q = 1.0 / (e + 1);
      break;
    case Protocol::kOlh: {
      const double rounded = std::round(e) + 1;
      if (rounded > 1e9) {
        return absl::InvalidArgumentError("epsilon too large for OLH");
      }
      params.dprime = static_cast<int>(rounded);
      params.p = e / (e + params.dprime - 1);
      params.q = 1.0 / params.dprime;
      break;
    }
  }
  return params;
}

uint32_t HashEval(uint64_t seed, uint64_t item, int dprime) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(item >> (8 * i));
  return static_cast<uint32_t>(XXH64(buf, sizeof(buf), seed) %
                               static_cast<uint64_t>(dprime));
}

absl::StatusOr<Report> Perturb(int item, const ProtocolParams& params,
                               Rng& rng) {
  if (item < 0 || item >= params.d) {
    return absl::OutOfRangeError(
        absl::StrCat("item ", item, " outside [0, ", params.d, ")"));
  }
  std::bernoulli_distribution keep(params.p);
  switch (params.protocol) {
    case Protocol::kKrr:
      return KrrReport{keep(rng) ? item : UniformOther(params.d, item, rng)};
    case Protocol::kOue: {
      OueReport report;
      report.bits.assign(params.d, false);
      ForEachBernoulliHit(params.d, params.q, rng,
                          [&](int v) { report.bits[v] = true; });
      report.bits[item] = keep(rng);
      return report;
    }
    case Protocol::kOlh: {
      OlhReport report;
      report.seed = rng();
      const int h = static_cast<int>(HashEval(report.seed, item, params.dprime));
      report.hash_value = keep(rng) ? h : UniformOther(params.dprime, h, rng);
      return report;
    }
  }
  return absl::InternalError("unreachable");
}

bool Supports(const Report& report, int item, const ProtocolParams& params) {
  if (const auto* krr = std::get_if<KrrReport>(&report)) {
    return krr->item == item;
  }
  if (const auto* oue = std::get_if<OueReport>(&report)) {
    return item >= 0 && item < static_cast<int>(oue->bits.size()) &&
           oue->bits[item];
  }
  const auto& olh = std::get<OlhReport>(report);
  return static_cast<int>(HashEval(olh.seed, item, params.dprime)) ==
         olh.hash_value;
}

int SupportSize(const Report& report, const ProtocolParams& params) {
  if (std::holds_alternative<KrrReport>(report)) return 1;
  if (const auto* oue = std::get_if<OueReport>(&report)) {
    return static_cast<int>(std::count(oue->bits.begin(), oue->bits.end(), true));
  }
  int size = 0;
  for (int v = 0; v < params.d; ++v) size += Supports(report, v, params);
  return size;
}

void AccumulateSupport(const Report& report, const ProtocolParams& params,
                       std::span<int64_t> support) {
  if (const auto* krr = std::get_if<KrrReport>(&report)) {
    ++support[krr->item];
    return;
  }
  if (const auto* oue = std::get_if<OueReport>(&report)) {
    for (int v = 0; v < params.d; ++v) support[v] += oue->bits[v];
    return;
  }
  const auto& olh = std::get<OlhReport>(report);
  for (int v = 0; v < params.d; ++v) {
    support[v] +=
        static_cast<int>(HashEval(olh.seed, v, params.dprime)) == olh.hash_value;
  }
}

absl::Status ValidateReport(const Report& report,
                            const ProtocolParams& params) {
  switch (params.protocol) {
    case Protocol::kKrr: {
      const auto* krr = std::get_if<KrrReport>(&report);
      if (krr == nullptr) return absl::InvalidArgumentError("mixed protocol");
      if (krr->item < 0 || krr->item >= params.d) {
        return absl::OutOfRangeError("kRR report item out of range");
      }
      return absl::OkStatus();
    }
    case Protocol::kOue: {
      const auto* oue = std::get_if<OueReport>(&report);
      if (oue == nullptr) return absl::InvalidArgumentError("mixed protocol");
      if (static_cast<int>(oue->bits.size()) != params.d) {
        return absl::InvalidArgumentError("OUE report length differs from d");
      }
      return absl::OkStatus();
    }
    case Protocol::kOlh: {
      const auto* olh = std::get_if<OlhReport>(&report);
      if (olh == nullptr) return absl::InvalidArgumentError("mixed protocol");
      if (olh->hash_value < 0 || olh->hash_value >= params.dprime) {
        return absl::OutOfRangeError("OLH hash value out of range");
      }
      return absl::OkStatus();
    }
  }
  return absl::InternalError("unreachable");
}

FrequencyEstimate EstimateFromSupport(std::span<const int64_t> support,
                                      int64_t num_reports,
                                      const ProtocolParams& params) {
  FrequencyEstimate estimate;
  estimate.values.resize(support.size());
  const double scale = 1.0 / (params.p - params.q);
  const double offset = static_cast<double>(num_reports) * params.q;
  for (size_t v = 0; v < support.size(); ++v) {
    estimate.values[v] = (static_cast<double>(support[v]) - offset) * scale;
  }
  return estimate;
}

absl::StatusOr<FrequencyEstimate> Aggregate(std::span<const Report> reports,
                                            const ProtocolParams& params) {
  if (reports.empty()) return absl::InvalidArgumentError("empty report set");
  std::vector<int64_t> support(params.d, 0);
  for (const Report& report : reports) {
    if (absl::Status s = ValidateReport(report, params); !s.ok()) return s;
    AccumulateSupport(report, params, support);
  }
  return EstimateFromSupport(support, static_cast<int64_t>(reports.size()),
                             params);
}

std::vector<Report> PerturbPopulation(std::span<const int64_t> item_counts,
                                      const ProtocolParams& params, Rng& rng) {
  std::vector<Report> reports;
  int64_t total = 0;
  for (int64_t c : item_counts) total += c;
  reports.reserve(total);
  for (size_t v = 0; v < item_counts.size(); ++v) {
    for (int64_t i = 0; i < item_counts[v]; ++i) {
      reports.push_back(*Perturb(static_cast<int>(v), params, rng));
    }
  }
  return reports;
}

std::vector<int64_t> SimulateSupportCounts(std::span<const int64_t> item_counts,
                                           const ProtocolParams& params,
                                           Rng& rng) {
  const int d = params.d;
  std::vector<int64_t> support(d, 0);
  int64_t total = 0;
  for (int64_t c : item_counts) total += c;
  switch (params.protocol) {
    case Protocol::kKrr: {
      for (int v = 0; v < d; ++v) {
        if (item_counts[v] == 0) continue;
        std::binomial_distribution<int64_t> kept(item_counts[v], params.p);
        const int64_t stay = kept(rng);
        support[v] += stay;
        for (int64_t i = stay; i < item_counts[v]; ++i) {
          ++support[UniformOther(d, v, rng)];
        }
      }
      break;
    }
    case Protocol::kOue: {
      // Bits are independent across positions and users, so each column is
      // a sum of two binomials.
      for (int v = 0; v < d; ++v) {
        std::binomial_distribution<int64_t> own(item_counts[v], params.p);
        std::binomial_distribution<int64_t> other(total - item_counts[v],
                                                  params.q);
        support[v] = own(rng) + other(rng);
      }
      break;
    }
    case Protocol::kOlh: {
      std::bernoulli_distribution keep(params.p);
      for (int v = 0; v < d; ++v) {
        for (int64_t i = 0; i < item_counts[v]; ++i) {
          const uint64_t seed = rng();
          const int h = static_cast<int>(HashEval(seed, v, params.dprime));
          const int reported =
              keep(rng) ? h : UniformOther(params.dprime, h, rng);
          for (int u = 0; u < d; ++u) {
            support[u] +=
                static_cast<int>(HashEval(seed, u, params.dprime)) == reported;
          }
        }
      }
      break;
    }
  }
  return support;
}

double ExpectedSupportSize(const ProtocolParams& params) {
  return params.p + (params.d - 1) * params.q;
}

int StealthOnes(const ProtocolParams& params) {
  const int ones = static_cast<int>(std::floor(ExpectedSupportSize(params) + 0.5));
  return std::clamp(ones, 1, params.d);
}

double PerturbedVariance(double n_v, double total_users,
                         const ProtocolParams& params) {
  return n_v * params.p * (1 - params.p) +
         (total_users - n_v) * params.q * (1 - params.q);
}

}  // namespace ldprank
