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


#include "ldprank/data.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldprank {
namespace {

using ::testing::ElementsAre;

std::string TempPath(const std::string& name) {
  return (std::filesystem::path(::testing::TempDir()) / name).string();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  out << contents;
}

TEST(DatasetTest, CreateComputesTotalsAndDefaultLabels) {
  absl::StatusOr<Dataset> dataset = Dataset::Create({3, 0, 2});
  ASSERT_TRUE(dataset.ok());
  EXPECT_EQ(dataset->d(), 3);
  EXPECT_EQ(dataset->n(), 5);
  EXPECT_THAT(dataset->labels(), ElementsAre("0", "1", "2"));
}

TEST(DatasetTest, CreateRejectsInvalidCounts) {
  EXPECT_FALSE(Dataset::Create({}).ok());
  EXPECT_FALSE(Dataset::Create({0, 0}).ok());
  EXPECT_FALSE(Dataset::Create({1, -1, 3}).ok());
  EXPECT_FALSE(Dataset::Create({1, 2}, {"only-one"}).ok());
}

TEST(GenZipfTest, CountsSumToN) {
  Rng rng(1);
  absl::StatusOr<Dataset> dataset = GenZipf(100, 100000, 1.0, rng);
  ASSERT_TRUE(dataset.ok());
  EXPECT_EQ(dataset->d(), 100);
  EXPECT_EQ(dataset->n(), 100000);
  EXPECT_EQ(std::accumulate(dataset->counts().begin(), dataset->counts().end(),
                            int64_t{0}),
            100000);
}

TEST(GenZipfTest, SortedDescending) {
  Rng rng(2);
  const Dataset dataset = *GenZipf(50, 20000, 1.2, rng);
  EXPECT_TRUE(std::is_sorted(dataset.counts().rbegin(), dataset.counts().rend()));
}

TEST(GenZipfTest, DeterministicForFixedSeed) {
  Rng a(3), b(3);
  EXPECT_EQ(GenZipf(100, 100000, 1.0, a)->counts(),
            GenZipf(100, 100000, 1.0, b)->counts());
}

TEST(GenZipfTest, TinyExponentApproachesUniform) {
  Rng rng(4);
  const Dataset dataset = *GenZipf(10, 10000000, 1e-9, rng);
  const auto [lo, hi] =
      std::minmax_element(dataset.counts().begin(), dataset.counts().end());
  EXPECT_LT(static_cast<double>(*hi) / *lo, 1.01);
}

// Rank-1 share against the closed-form normalization, averaged over draws.
TEST(GenZipfTest, TopShareMatchesNormalization) {
  for (double s : {0.8, 1.0, 1.5}) {
    double harmonic = 0;
    for (int k = 1; k <= 100; ++k) harmonic += std::pow(k, -s);
    const double expected = 1.0 / harmonic;
    Rng rng(5);
    double share = 0;
    const int draws = 20;
    for (int i = 0; i < draws; ++i) {
      share += GenZipf(100, 100000, s, rng)->counts()[0] / 100000.0;
    }
    const double sd = std::sqrt(expected * (1 - expected) / 100000 / draws);
    EXPECT_NEAR(share / draws, expected, 5 * sd) << "s=" << s;
  }
}

TEST(GenZipfTest, RejectsInvalidParameters) {
  Rng rng(6);
  EXPECT_FALSE(GenZipf(1, 100, 1.0, rng).ok());
  EXPECT_FALSE(GenZipf(10, 0, 1.0, rng).ok());
  EXPECT_FALSE(GenZipf(10, 100, 0.0, rng).ok());
  EXPECT_FALSE(GenZipf(10, 100, -1.0, rng).ok());
}

TEST(LoadCsvTest, CountsByDescendingFrequencyThenFirstOccurrence) {
  const std::string path = TempPath("load_basic.csv");
  WriteFile(path,
            "id,color,size\n1,red,s\n2,blue,m\n3,green,l\n4,blue,s\n"
            "5,green,m\n6,\"gr,ey\",l\n");
  absl::StatusOr<Dataset> dataset = LoadCsv(path, "color");
  ASSERT_TRUE(dataset.ok()) << dataset.status();
  EXPECT_THAT(dataset->labels(), ElementsAre("blue", "green", "red", "gr,ey"));
  EXPECT_THAT(dataset->counts(), ElementsAre(2, 2, 1, 1));
  EXPECT_EQ(dataset->n(), 6);
}

TEST(LoadCsvTest, MaxDomainKeepsMostFrequent) {
  const std::string path = TempPath("load_max.csv");
  WriteFile(path, "x\na\nb\nb\nc\nc\nc\n");
  absl::StatusOr<Dataset> dataset = LoadCsv(path, "x", 2);
  ASSERT_TRUE(dataset.ok());
  EXPECT_THAT(dataset->labels(), ElementsAre("c", "b"));
  EXPECT_EQ(dataset->n(), 5);
}

TEST(LoadCsvTest, OneRowFile) {
  const std::string path = TempPath("load_one.csv");
  WriteFile(path, "age\n39\n");
  absl::StatusOr<Dataset> dataset = LoadCsv(path, "age");
  ASSERT_TRUE(dataset.ok());
  EXPECT_EQ(dataset->d(), 1);
  EXPECT_THAT(dataset->counts(), ElementsAre(1));
}

TEST(LoadCsvTest, Errors) {
  EXPECT_EQ(LoadCsv(TempPath("does_not_exist.csv"), "x").status().code(),
            absl::StatusCode::kNotFound);
  const std::string path = TempPath("load_err.csv");
  WriteFile(path, "a,b\n1,2\n");
  EXPECT_EQ(LoadCsv(path, "c").status().code(), absl::StatusCode::kNotFound);
  const std::string empty = TempPath("load_empty.csv");
  WriteFile(empty, "a,b\n");
  EXPECT_EQ(LoadCsv(empty, "a").status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(LoadCsvTest, DeterministicForFixedFile) {
  const std::string path = TempPath("load_det.csv");
  WriteFile(path, "v\nq\nw\nq\ne\nw\nq\n");
  const Dataset a = *LoadCsv(path, "v");
  const Dataset b = *LoadCsv(path, "v");
  EXPECT_EQ(a.counts(), b.counts());
  EXPECT_EQ(a.labels(), b.labels());
}

TEST(ItemsCsvTest, RoundTripReproducesCounts) {
  Rng rng(7);
  const Dataset zipf = *GenZipf(30, 5000, 1.0, rng);
  const std::string path = TempPath("items_zipf.csv");
  ASSERT_TRUE(WriteItemsCsv(zipf, path).ok());
  absl::StatusOr<Dataset> back = ReadItemsCsv(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->counts(), zipf.counts());
  EXPECT_EQ(back->labels(), zipf.labels());

  const Dataset labelled =
      *Dataset::Create({4, 2, 1}, {"plain", "with,comma", "with\"quote"});
  const std::string labelled_path = TempPath("items_labels.csv");
  ASSERT_TRUE(WriteItemsCsv(labelled, labelled_path).ok());
  absl::StatusOr<Dataset> labelled_back = ReadItemsCsv(labelled_path);
  ASSERT_TRUE(labelled_back.ok()) << labelled_back.status();
  EXPECT_EQ(labelled_back->labels(), labelled.labels());
  EXPECT_EQ(labelled_back->counts(), labelled.counts());
}

TEST(ItemsCsvTest, HeaderIsDocumentedSchema) {
  const Dataset dataset = *Dataset::Create({1});
  const std::string path = TempPath("items_header.csv");
  ASSERT_TRUE(WriteItemsCsv(dataset, path).ok());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "item_id,original_value,count");
}

TEST(ItemsCsvTest, RejectsMalformedFiles) {
  const std::string path = TempPath("items_bad.csv");
  WriteFile(path, "item_id,original_value,count\n1,a,3\n");
  EXPECT_FALSE(ReadItemsCsv(path).ok());
  WriteFile(path, "id,value\n");
  EXPECT_FALSE(ReadItemsCsv(path).ok());
}

}  // namespace
}  // namespace ldprank
