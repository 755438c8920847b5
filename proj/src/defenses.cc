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


#include "ldprank/defenses.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace ldprank {

absl::string_view DefenseName(Defense defense) {
  switch (defense) {
    case Defense::kNone:
      return "none";
    case Defense::kNormalize:
      return "normalize";
    case Defense::kDetect:
      return "detect";
    case Defense::kLdpRecover:
      return "ldprecover";
    case Defense::kLdpRecoverStar:
      return "ldprecover-star";
  }
  return "unknown";
}

absl::StatusOr<Defense> ParseDefense(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  for (Defense d : {Defense::kNone, Defense::kNormalize, Defense::kDetect,
                    Defense::kLdpRecover, Defense::kLdpRecoverStar}) {
    if (DefenseName(d) == lower) return d;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown defense: ", name));
}

absl::StatusOr<std::vector<double>> Normalize(std::span<const double> freqs) {
  if (freqs.size() < 2) return absl::InvalidArgumentError("need d >= 2");
  const double low = *std::min_element(freqs.begin(), freqs.end());
  std::vector<double> out(freqs.size());
  double total = 0;
  for (size_t v = 0; v < freqs.size(); ++v) {
    out[v] = freqs[v] - low;
    total += out[v];
  }
  if (!(total > 0)) {
    std::fill(out.begin(), out.end(), 1.0 / freqs.size());
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

std::vector<size_t> DetectFakeOue(std::span<const Report> reports,
                                  const DetectionConfig& config) {
  std::map<std::vector<bool>, std::vector<size_t>> groups;
  for (size_t i = 0; i < reports.size(); ++i) {
    if (const auto* oue = std::get_if<OueReport>(&reports[i])) {
      groups[oue->bits].push_back(i);
    }
  }
  std::vector<size_t> flagged;
  for (const auto& [bits, members] : groups) {
    const int64_t ones = std::count(bits.begin(), bits.end(), true);
    if (ones >= config.min_support_size &&
        static_cast<int64_t>(members.size()) > config.count_threshold) {
      flagged.insert(flagged.end(), members.begin(), members.end());
    }
  }
  std::sort(flagged.begin(), flagged.end());
  return flagged;
}

double DefaultPerFakeSupport(const ProtocolParams& params) {
  switch (params.protocol) {
    case Protocol::kKrr:
      return 1;
    case Protocol::kOue:
      return StealthOnes(params);
    case Protocol::kOlh:
      return std::max(1.0, std::floor(ExpectedSupportSize(params) / 2 + 0.5));
  }
  return 1;
}

std::vector<double> ProjectOntoSimplex(std::span<const double> v, double mass) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty() || !(mass > 0)) return out;
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0;
  double theta = 0;
  for (size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - mass) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0) theta = candidate;
  }
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

namespace {

absl::StatusOr<std::vector<double>> Recover(std::span<const int64_t> support,
                                            int64_t total_reports,
                                            const ProtocolParams& params,
                                            const RecoverConfig& config,
                                            const std::vector<bool>& presumed_target) {
  const int d = static_cast<int>(support.size());
  const int64_t genuine = total_reports - config.known_m;
  if (config.known_m < 0 || genuine < 0) {
    return absl::InvalidArgumentError("known fake count out of range");
  }
  const int nontargets = static_cast<int>(
      std::count(presumed_target.begin(), presumed_target.end(), false));
  if (nontargets == 0) return absl::FailedPreconditionError("empty D1");
  const double fake_share =
      config.per_fake_support * static_cast<double>(config.known_m) / nontargets;
  const double scale = 1.0 / (params.p - params.q);
  const double offset = static_cast<double>(genuine) * params.q;
  std::vector<double> estimate(d);
  for (int v = 0; v < d; ++v) {
    double c = static_cast<double>(support[v]) - offset;
    if (!presumed_target[v]) c -= fake_share;
    estimate[v] = c * scale;
  }
  return ProjectOntoSimplex(estimate, static_cast<double>(genuine));
}

}  // namespace

absl::StatusOr<std::vector<double>> LdpRecover(std::span<const int64_t> support,
                                               int64_t total_reports,
                                               const ProtocolParams& params,
                                               const RecoverConfig& config) {
  if (config.known_targets.has_value()) {
    return LdpRecoverStar(support, total_reports, params, config);
  }
  const FrequencyEstimate poisoned =
      EstimateFromSupport(support, total_reports, params);
  std::vector<bool> presumed_target(support.size());
  for (size_t v = 0; v < support.size(); ++v) {
    presumed_target[v] = poisoned.values[v] <= 0;
  }
  return Recover(support, total_reports, params, config, presumed_target);
}

absl::StatusOr<std::vector<double>> LdpRecoverStar(
    std::span<const int64_t> support, int64_t total_reports,
    const ProtocolParams& params, const RecoverConfig& config) {
  if (!config.known_targets.has_value()) {
    return absl::InvalidArgumentError("known targets required");
  }
  std::vector<bool> presumed_target(support.size(), false);
  for (int t : *config.known_targets) {
    if (t < 0 || t >= static_cast<int>(support.size())) {
      return absl::OutOfRangeError("known target out of range");
    }
    presumed_target[t] = true;
  }
  return Recover(support, total_reports, params, config, presumed_target);
}

}  // namespace ldprank
