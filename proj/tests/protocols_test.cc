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
#include <numeric>
#include <set>
#include <vector>

#include "boost/math/distributions/chi_squared.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldprank {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;

ProtocolParams Params(Protocol protocol, int d, double epsilon) {
  absl::StatusOr<ProtocolParams> params = MakeParams(protocol, d, epsilon);
  EXPECT_TRUE(params.ok()) << params.status();
  return *params;
}

TEST(MakeParamsTest, KrrClosedForm) {
  const ProtocolParams params = Params(Protocol::kKrr, 3, std::log(2.0));
  EXPECT_DOUBLE_EQ(params.p, 0.5);
  EXPECT_DOUBLE_EQ(params.q, 0.25);
}

TEST(MakeParamsTest, OueClosedFormIndependentOfD) {
  for (int d : {2, 7, 1000}) {
    const ProtocolParams params = Params(Protocol::kOue, d, std::log(3.0));
    EXPECT_DOUBLE_EQ(params.p, 0.5);
    EXPECT_DOUBLE_EQ(params.q, 0.25);
  }
}

TEST(MakeParamsTest, OlhClosedForm) {
  const ProtocolParams params = Params(Protocol::kOlh, 100, std::log(3.0));
  EXPECT_EQ(params.dprime, 4);
  EXPECT_DOUBLE_EQ(params.p, 0.5);
  EXPECT_DOUBLE_EQ(params.q, 0.25);
}

TEST(MakeParamsTest, RejectsSmallDomainAndBadEpsilon) {
  EXPECT_FALSE(MakeParams(Protocol::kKrr, 1, 1.0).ok());
  EXPECT_FALSE(MakeParams(Protocol::kOue, 10, 0.0).ok());
  EXPECT_FALSE(MakeParams(Protocol::kOlh, 10, -1.0).ok());
  EXPECT_FALSE(MakeParams(Protocol::kKrr, 10, std::nan("")).ok());
}

TEST(MakeParamsTest, PureLdpOrderingHoldsAcrossGrid) {
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    for (int d : {2, 10, 311}) {
      for (double eps = 0.5; eps <= 6.0; eps += 0.5) {
        const ProtocolParams params = Params(protocol, d, eps);
        EXPECT_GT(params.q, 0);
        EXPECT_LT(params.q, params.p);
        EXPECT_LT(params.p, 1);
      }
    }
  }
}

TEST(ProtocolNameTest, RoundTrips) {
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    EXPECT_EQ(*ParseProtocol(ProtocolName(protocol)), protocol);
  }
  EXPECT_FALSE(ParseProtocol("rappor").ok());
}

TEST(PerturbTest, RejectsOutOfRangeItem) {
  Rng rng(1);
  const ProtocolParams params = Params(Protocol::kKrr, 5, 1.0);
  EXPECT_FALSE(Perturb(5, params, rng).ok());
  EXPECT_FALSE(Perturb(-1, params, rng).ok());
}

TEST(PerturbTest, KrrLargeEpsilonReportsTheItem) {
  Rng rng(2);
  const ProtocolParams params = Params(Protocol::kKrr, 10, 40.0);
  for (int v = 0; v < 10; ++v) {
    EXPECT_EQ(std::get<KrrReport>(*Perturb(v, params, rng)).item, v);
  }
}

TEST(PerturbTest, KrrTrueItemFrequencyMatchesP) {
  Rng rng(3);
  const ProtocolParams params = Params(Protocol::kKrr, 3, std::log(2.0));
  const int trials = 100000;
  int kept = 0;
  for (int i = 0; i < trials; ++i) {
    kept += std::get<KrrReport>(*Perturb(1, params, rng)).item == 1;
  }
  EXPECT_NEAR(static_cast<double>(kept) / trials, 0.5, 0.01);
}

TEST(PerturbTest, ReportsAreWellFormed) {
  Rng rng(4);
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 17, 1.5);
    for (int i = 0; i < 200; ++i) {
      absl::StatusOr<Report> report = Perturb(i % 17, params, rng);
      ASSERT_TRUE(report.ok());
      EXPECT_TRUE(ValidateReport(*report, params).ok());
    }
  }
}

// Pr[v in S(perturb(v))] = p and Pr[v in S(perturb(u))] = q within 3 sigma.
TEST(PerturbTest, SupportProbabilitiesMatchPAndQ) {
  Rng rng(5);
  const int trials = 100000;
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 8, 1.0);
    int own = 0;
    int other = 0;
    for (int i = 0; i < trials; ++i) {
      const Report report = *Perturb(2, params, rng);
      own += Supports(report, 2, params);
      other += Supports(report, 5, params);
    }
    const double sigma_p = std::sqrt(params.p * (1 - params.p) / trials);
    const double sigma_q = std::sqrt(params.q * (1 - params.q) / trials);
    EXPECT_NEAR(static_cast<double>(own) / trials, params.p, 3 * sigma_p)
        << ProtocolName(protocol);
    EXPECT_NEAR(static_cast<double>(other) / trials, params.q, 3 * sigma_q)
        << ProtocolName(protocol);
  }
}

TEST(SupportsTest, OueBitVectorSupportsItsOnes) {
  const ProtocolParams params = Params(Protocol::kOue, 6, 1.0);
  // 001111 in 1-indexed positions 3..6, i.e. items 2..5.
  const Report report = OueReport{{false, false, true, true, true, true}};
  std::vector<int> supported;
  for (int v = 0; v < 6; ++v) {
    if (Supports(report, v, params)) supported.push_back(v);
  }
  EXPECT_THAT(supported, ElementsAre(2, 3, 4, 5));
  EXPECT_EQ(SupportSize(report, params), 4);
}

TEST(SupportsTest, KrrIsSingleton) {
  const ProtocolParams params = Params(Protocol::kKrr, 4, 1.0);
  const Report report = KrrReport{3};
  EXPECT_TRUE(Supports(report, 3, params));
  for (int v = 0; v < 3; ++v) EXPECT_FALSE(Supports(report, v, params));
  EXPECT_EQ(SupportSize(report, params), 1);
}

TEST(SupportsTest, OlhMatchesHash) {
  const ProtocolParams params = Params(Protocol::kOlh, 50, 2.0);
  const OlhReport report{12345, 3};
  int size = 0;
  for (int v = 0; v < 50; ++v) {
    const bool expected =
        static_cast<int>(HashEval(12345, v, params.dprime)) == 3;
    EXPECT_EQ(Supports(report, v, params), expected);
    size += expected;
  }
  EXPECT_EQ(SupportSize(report, params), size);
}

TEST(AccumulateSupportTest, AgreesWithSupports) {
  Rng rng(6);
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 20, 1.0);
    for (int i = 0; i < 50; ++i) {
      const Report report = *Perturb(i % 20, params, rng);
      std::vector<int64_t> support(20, 0);
      AccumulateSupport(report, params, support);
      for (int v = 0; v < 20; ++v) {
        EXPECT_EQ(support[v], Supports(report, v, params) ? 1 : 0);
      }
    }
  }
}

TEST(AggregateTest, EstimatorSubstitution) {
  // n = 100, p = 0.5, q = 0.25, 40 supports -> (40 - 25) / 0.25 = 60.
  const ProtocolParams params = Params(Protocol::kOue, 2, std::log(3.0));
  std::vector<Report> reports;
  for (int i = 0; i < 100; ++i) {
    reports.push_back(OueReport{{i < 40, false}});
  }
  absl::StatusOr<FrequencyEstimate> estimate = Aggregate(reports, params);
  ASSERT_TRUE(estimate.ok());
  EXPECT_DOUBLE_EQ(estimate->values[0], 60);
  EXPECT_DOUBLE_EQ(estimate->values[1], -100);
}

TEST(AggregateTest, AllSupportingGivesClosedForm) {
  const ProtocolParams params = Params(Protocol::kKrr, 3, std::log(2.0));
  std::vector<Report> reports(80, KrrReport{1});
  const FrequencyEstimate estimate = *Aggregate(reports, params);
  EXPECT_DOUBLE_EQ(estimate.values[1], 80 * (1 - params.q) / (params.p - params.q));
}

TEST(AggregateTest, RejectsEmptyAndMixedInput) {
  const ProtocolParams params = Params(Protocol::kKrr, 3, 1.0);
  EXPECT_FALSE(Aggregate({}, params).ok());
  std::vector<Report> mixed = {KrrReport{0}, OlhReport{1, 0}};
  EXPECT_FALSE(Aggregate(mixed, params).ok());
  std::vector<Report> out_of_range = {KrrReport{3}};
  EXPECT_FALSE(Aggregate(out_of_range, params).ok());
  const ProtocolParams oue = Params(Protocol::kOue, 3, 1.0);
  std::vector<Report> short_row = {OueReport{{true, false}}};
  EXPECT_FALSE(Aggregate(short_row, oue).ok());
}

TEST(AggregateTest, PermutationEquivariant) {
  Rng rng(7);
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 12, 1.0);
    std::vector<int64_t> counts = {50, 30, 20, 10, 5, 5, 5, 5, 2, 1, 1, 1};
    std::vector<Report> reports = PerturbPopulation(counts, params, rng);
    const FrequencyEstimate first = *Aggregate(reports, params);
    std::shuffle(reports.begin(), reports.end(), rng);
    const FrequencyEstimate second = *Aggregate(reports, params);
    EXPECT_EQ(first.values, second.values);
  }
}

TEST(HashEvalTest, DeterministicAndInRange) {
  for (uint64_t item = 0; item < 1000; ++item) {
    const uint32_t h = HashEval(99, item, 7);
    EXPECT_EQ(h, HashEval(99, item, 7));
    EXPECT_LT(h, 7u);
  }
}

TEST(HashEvalTest, ChiSquareUniformity) {
  const int dprime = 11;
  const int items = 10000;
  std::vector<int> bins(dprime, 0);
  for (int v = 0; v < items; ++v) ++bins[HashEval(424242, v, dprime)];
  const double expected = static_cast<double>(items) / dprime;
  double stat = 0;
  for (int b : bins) stat += (b - expected) * (b - expected) / expected;
  const boost::math::chi_squared dist(dprime - 1);
  EXPECT_LT(stat, boost::math::quantile(dist, 0.99));
}

TEST(HashEvalTest, DistinctSeedsGiveDistinctMappings) {
  const int probe = 64;
  std::set<std::vector<uint32_t>> mappings;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    std::vector<uint32_t> mapping;
    for (int v = 0; v < probe; ++v) mapping.push_back(HashEval(seed, v, 5));
    mappings.insert(mapping);
  }
  EXPECT_EQ(mappings.size(), 200u);
}

// Mean estimate over trials within 3 standard errors for >= 95% of items.
TEST(SimulateSupportCountsTest, EstimatorIsUnbiased) {
  std::vector<int64_t> counts(40);
  for (int v = 0; v < 40; ++v) counts[v] = 2000 / (v + 1);
  int64_t n = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 40, 1.0);
    Rng rng(8);
    const int trials = 30;
    std::vector<std::vector<double>> samples(40);
    for (int t = 0; t < trials; ++t) {
      const std::vector<int64_t> support =
          SimulateSupportCounts(counts, params, rng);
      const FrequencyEstimate est = EstimateFromSupport(support, n, params);
      for (int v = 0; v < 40; ++v) samples[v].push_back(est.values[v]);
    }
    int within = 0;
    for (int v = 0; v < 40; ++v) {
      double mean = 0;
      for (double x : samples[v]) mean += x;
      mean /= trials;
      double var = 0;
      for (double x : samples[v]) var += (x - mean) * (x - mean);
      const double se = std::sqrt(var / (trials - 1) / trials);
      within += std::abs(mean - counts[v]) <= 3 * se;
    }
    EXPECT_GE(within, 38) << ProtocolName(protocol);
  }
}

// Aggregating materialized reports and the shortcut agree in distribution:
// compare per-item means over repeated draws.
TEST(SimulateSupportCountsTest, MatchesMaterializedReportsInMean) {
  std::vector<int64_t> counts = {300, 200, 100, 50, 25, 10, 5, 0};
  for (Protocol protocol : {Protocol::kKrr, Protocol::kOue, Protocol::kOlh}) {
    const ProtocolParams params = Params(protocol, 8, 1.0);
    Rng rng(9);
    std::vector<double> fast(8, 0), slow(8, 0);
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const std::vector<int64_t> s = SimulateSupportCounts(counts, params, rng);
      std::vector<int64_t> r(8, 0);
      for (const Report& report : PerturbPopulation(counts, params, rng)) {
        AccumulateSupport(report, params, r);
      }
      for (int v = 0; v < 8; ++v) {
        fast[v] += s[v];
        slow[v] += r[v];
      }
    }
    for (int v = 0; v < 8; ++v) {
      const double n = 690;
      const double mean = counts[v] * params.p + (n - counts[v]) * params.q;
      const double sd = std::sqrt(PerturbedVariance(counts[v], n, params) / trials);
      EXPECT_THAT(fast[v] / trials, DoubleNear(mean, 4 * sd + 1e-9));
      EXPECT_THAT(slow[v] / trials, DoubleNear(mean, 4 * sd + 1e-9));
    }
  }
}

// Empirical kRR estimate variance against Var(n'_v)/(p-q)^2, pooled over
// items, over 50 trials.
TEST(SimulateSupportCountsTest, KrrVarianceMatchesClosedForm) {
  std::vector<int64_t> counts(20);
  for (int v = 0; v < 20; ++v) counts[v] = 5000 / (v + 1);
  const int64_t n = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  const ProtocolParams params = Params(Protocol::kKrr, 20, 1.0);
  Rng rng(10);
  const int trials = 50;
  std::vector<std::vector<double>> samples(20);
  for (int t = 0; t < trials; ++t) {
    const FrequencyEstimate est = EstimateFromSupport(
        SimulateSupportCounts(counts, params, rng), n, params);
    for (int v = 0; v < 20; ++v) samples[v].push_back(est.values[v]);
  }
  double empirical = 0, predicted = 0;
  const double scale = params.p - params.q;
  for (int v = 0; v < 20; ++v) {
    double mean = 0;
    for (double x : samples[v]) mean += x;
    mean /= trials;
    for (double x : samples[v]) empirical += (x - mean) * (x - mean) / (trials - 1);
    predicted += PerturbedVariance(counts[v], n, params) / (scale * scale);
  }
  EXPECT_NEAR(empirical / predicted, 1.0, 0.2);
}

TEST(StealthOnesTest, RoundsHalfUp) {
  // d = 5, eps = ln 3: E_1 = 0.5 + 4 * 0.25 = 1.5 -> 2.
  const ProtocolParams params = Params(Protocol::kOue, 5, std::log(3.0));
  EXPECT_DOUBLE_EQ(ExpectedSupportSize(params), 1.5);
  EXPECT_EQ(StealthOnes(params), 2);
}

TEST(PerturbedVarianceTest, Substitution) {
  const ProtocolParams params = Params(Protocol::kOue, 4, std::log(3.0));
  EXPECT_DOUBLE_EQ(PerturbedVariance(100, 1000, params), 193.75);
}

}  // namespace
}  // namespace ldprank
