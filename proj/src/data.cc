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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "boost/tokenizer.hpp"

namespace ldprank {
namespace {

using CsvTokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::string trimmed = line;
  if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
  CsvTokenizer tok(trimmed);
  return {tok.begin(), tok.end()};
}

// Renumbers items by descending count; stable, so ties keep input order.
Dataset SortedByCount(std::vector<int64_t> counts,
                      std::vector<std::string> labels) {
  std::vector<int> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });
  std::vector<int64_t> sorted_counts;
  std::vector<std::string> sorted_labels;
  for (int i : order) {
    sorted_counts.push_back(counts[i]);
    if (!labels.empty()) sorted_labels.push_back(labels[i]);
  }
  return *Dataset::Create(std::move(sorted_counts), std::move(sorted_labels));
}

}  // namespace

absl::StatusOr<Dataset> Dataset::Create(std::vector<int64_t> counts,
                                        std::vector<std::string> labels) {
  if (counts.empty()) return absl::InvalidArgumentError("empty domain");
  if (!labels.empty() && labels.size() != counts.size()) {
    return absl::InvalidArgumentError("labels and counts differ in length");
  }
  int64_t n = 0;
  for (int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("negative count");
    n += c;
  }
  if (n < 1) return absl::InvalidArgumentError("dataset has no users");
  if (labels.empty()) {
    labels.reserve(counts.size());
    for (size_t v = 0; v < counts.size(); ++v) labels.push_back(absl::StrCat(v));
  }
  return Dataset(std::move(counts), std::move(labels), n);
}

absl::StatusOr<Dataset> GenZipf(int d, int64_t n, double exponent, Rng& rng) {
  if (d < 2 || n < 1 || !(exponent > 0) || !std::isfinite(exponent)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid Zipf parameters d=", d, " n=", n,
                     " exponent=", exponent));
  }
  std::vector<double> weights(d);
  for (int k = 0; k < d; ++k) weights[k] = std::pow(k + 1.0, -exponent);
  double remaining_weight = std::accumulate(weights.begin(), weights.end(), 0.0);
  // Multinomial draw as a chain of conditional binomials.
  std::vector<int64_t> counts(d, 0);
  int64_t remaining = n;
  for (int k = 0; k < d - 1 && remaining > 0; ++k) {
    const double prob = std::clamp(weights[k] / remaining_weight, 0.0, 1.0);
    std::binomial_distribution<int64_t> draw(remaining, prob);
    counts[k] = draw(rng);
    remaining -= counts[k];
    remaining_weight -= weights[k];
  }
  counts[d - 1] += remaining;
  return SortedByCount(std::move(counts), {});
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                absl::string_view column,
                                std::optional<int> max_domain) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": missing header"));
  }
  std::vector<std::string> header;
  try {
    header = SplitCsvLine(line);
  } catch (const boost::escaped_list_error& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
  auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    return absl::NotFoundError(absl::StrCat("column not found: ", column));
  }
  const size_t col = it - header.begin();

  std::unordered_map<std::string, int> index;
  std::vector<std::string> labels;
  std::vector<int64_t> counts;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields;
    try {
      fields = SplitCsvLine(line);
    } catch (const boost::escaped_list_error& e) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
    }
    if (fields.size() <= col) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": row with too few fields"));
    }
    auto [pos, inserted] = index.emplace(fields[col], labels.size());
    if (inserted) {
      labels.push_back(fields[col]);
      counts.push_back(0);
    }
    ++counts[pos->second];
  }
  if (counts.empty()) return absl::InvalidArgumentError("empty data");
  Dataset sorted = SortedByCount(std::move(counts), std::move(labels));
  if (max_domain.has_value() && *max_domain >= 1 && *max_domain < sorted.d()) {
    std::vector<int64_t> kept(sorted.counts().begin(),
                              sorted.counts().begin() + *max_domain);
    std::vector<std::string> kept_labels(
        sorted.labels().begin(), sorted.labels().begin() + *max_domain);
    return Dataset::Create(std::move(kept), std::move(kept_labels));
  }
  return sorted;
}

absl::Status WriteItemsCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << "item_id,original_value,count\n";
  for (int v = 0; v < dataset.d(); ++v) {
    std::string label = dataset.labels()[v];
    if (label.find_first_of(",\"\\") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
      }
      label = quoted + "\"";
    }
    out << v << ',' << label << ',' << dataset.counts()[v] << '\n';
  }
  return out ? absl::OkStatus()
             : absl::UnavailableError(absl::StrCat("write failed: ", path));
}

absl::StatusOr<Dataset> ReadItemsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line) ||
      SplitCsvLine(line) !=
          std::vector<std::string>{"item_id", "original_value", "count"}) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": bad header"));
  }
  std::vector<int64_t> counts;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields;
    try {
      fields = SplitCsvLine(line);
    } catch (const boost::escaped_list_error& e) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
    }
    int64_t id = 0;
    int64_t count = 0;
    if (fields.size() != 3 || !absl::SimpleAtoi(fields[0], &id) ||
        !absl::SimpleAtoi(fields[2], &count) ||
        id != static_cast<int64_t>(counts.size())) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": bad row: ", line));
    }
    labels.push_back(fields[1]);
    counts.push_back(count);
  }
  return Dataset::Create(std::move(counts), std::move(labels));
}

}  // namespace ldprank
