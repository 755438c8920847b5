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

// Item-count datasets: synthetic Zipf populations and single-column CSV
// ingestion. A Dataset is immutable once built.

#ifndef LDPRANK_DATA_H_
#define LDPRANK_DATA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldprank/rng.h"

namespace ldprank {

class Dataset {
 public:
  // Fails when counts is empty, any count is negative, or the total is zero.
  // `labels` is either empty or has one entry per item.
  static absl::StatusOr<Dataset> Create(std::vector<int64_t> counts,
                                        std::vector<std::string> labels = {});

  int d() const { return static_cast<int>(counts_.size()); }
  int64_t n() const { return n_; }
  const std::vector<int64_t>& counts() const { return counts_; }
  // Original value of each item; item ids are positions.
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  Dataset(std::vector<int64_t> counts, std::vector<std::string> labels,
          int64_t n)
      : counts_(std::move(counts)), labels_(std::move(labels)), n_(n) {}

  std::vector<int64_t> counts_;
  std::vector<std::string> labels_;
  int64_t n_ = 0;
};

// Draws n users i.i.d. from a Zipf law over d ranks (weight 1/k^exponent),
// then assigns item ids by descending count with ties kept in rank order.
absl::StatusOr<Dataset> GenZipf(int d, int64_t n, double exponent, Rng& rng);

// Tallies one column of a headed CSV file. Distinct values are first
// numbered by first occurrence, then renumbered by descending count (ties
// by first occurrence). With max_domain set, only the max_domain most
// frequent values are kept.
absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                absl::string_view column,
                                std::optional<int> max_domain = std::nullopt);

// items.csv schema: item_id,original_value,count.
absl::Status WriteItemsCsv(const Dataset& dataset, const std::string& path);
absl::StatusOr<Dataset> ReadItemsCsv(const std::string& path);

}  // namespace ldprank

#endif  // LDPRANK_DATA_H_
