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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ldprank/harness.h"

namespace ldprank {
namespace {

// Column of a row used as the swept value.
std::string AxisValue(const ResultRow& row, absl::string_view axis) {
  auto num = [](double x) { return absl::StrFormat("%.10g", x); };
  if (axis == "beta") return num(row.beta);
  if (axis == "epsilon") return num(row.epsilon);
  if (axis == "r") return absl::StrCat(row.r);
  if (axis == "rho") return num(row.rho);
  if (axis == "eps_prime" || axis == "epsilon_prime" || axis == "epsilon-prime") {
    return num(row.eps_prime);
  }
  if (axis == "confidence") return num(row.confidence);
  if (axis == "g") return absl::StrCat(row.g);
  if (axis == "k") return absl::StrCat(row.k);
  if (axis == "attack") return row.attack;
  if (axis == "defense") return row.defense;
  if (axis == "protocol") return row.protocol;
  if (axis == "direction") return row.direction;
  return "";
}

// Every swept column; rows sharing it belong to the same cell.
using CellKey = std::tuple<std::string, std::string, std::string, std::string,
                           std::string, double, double, int, double, double,
                           double, int, int>;

CellKey KeyOf(const ResultRow& row) {
  return {row.dataset, row.protocol,  row.attack, row.defense,
          row.direction, row.beta,    row.epsilon, row.r,
          row.rho,     row.eps_prime, row.confidence, row.g,
          row.k};
}

// Mean and sample standard deviation, skipping NaN entries. NaN when empty.
std::pair<double, double> MeanStd(const std::vector<double>& xs) {
  double sum = 0;
  int count = 0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++count;
  }
  if (count == 0) return {std::nan(""), std::nan("")};
  const double mean = sum / count;
  double sq = 0;
  for (double x : xs) {
    if (!std::isnan(x)) sq += (x - mean) * (x - mean);
  }
  return {mean, count > 1 ? std::sqrt(sq / (count - 1)) : 0.0};
}

std::string Num(double x) {
  if (std::isnan(x)) return "nan";
  return absl::StrFormat("%.10g", x);
}

}  // namespace

std::vector<PlotRow> SummarizeCells(std::span<const ResultRow> rows,
                                    absl::string_view axis) {
  std::map<CellKey, size_t> index;
  std::vector<std::vector<const ResultRow*>> groups;
  for (const ResultRow& row : rows) {
    auto [it, inserted] = index.emplace(KeyOf(row), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&row);
  }
  std::vector<PlotRow> out;
  out.reserve(groups.size());
  for (const auto& group : groups) {
    const ResultRow& first = *group.front();
    PlotRow plot;
    plot.dataset = first.dataset;
    plot.protocol = first.protocol;
    plot.axis = std::string(axis);
    plot.value = AxisValue(first, axis);
    plot.attack = first.attack;
    plot.defense = first.defense;
    plot.n_trials = static_cast<int>(group.size());
    std::vector<double> gains, srs;
    for (const ResultRow* r : group) {
      gains.push_back(r->gain);
      srs.push_back(r->sr);
    }
    std::tie(plot.gain_mean, plot.gain_std) = MeanStd(gains);
    std::tie(plot.sr_mean, plot.sr_std) = MeanStd(srs);
    out.push_back(std::move(plot));
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> EmitPlotdata(
    const std::string& out_dir, std::span<const ResultRow> rows,
    std::span<const SweepAxis> axes) {
  if (rows.empty()) return absl::InvalidArgumentError("no results to summarize");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", out_dir, ": ", ec.message()));
  }
  std::vector<std::string> axis_names;
  for (const SweepAxis& axis : axes) axis_names.push_back(axis.name);
  if (axis_names.empty()) axis_names.push_back("none");

  std::vector<std::string> written;
  for (const std::string& axis : axis_names) {
    // One file per (dataset, protocol, axis).
    std::map<std::pair<std::string, std::string>, std::vector<PlotRow>> files;
    std::vector<std::pair<std::string, std::string>> order;
    for (PlotRow& row : SummarizeCells(rows, axis)) {
      auto key = std::make_pair(row.dataset, row.protocol);
      if (!files.contains(key)) order.push_back(key);
      files[key].push_back(std::move(row));
    }
    for (const auto& key : order) {
      const std::string path =
          (std::filesystem::path(out_dir) /
           absl::StrCat("plot_", key.first, "_", key.second, "_", axis, ".csv"))
              .string();
      std::ofstream out(path);
      if (!out) {
        return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
      }
      out << kPlotdataHeader << "\n";
      for (const PlotRow& p : files[key]) {
        out << p.dataset << "," << p.protocol << "," << p.axis << "," << p.value
            << "," << p.attack << "," << p.defense << "," << p.n_trials << ","
            << Num(p.gain_mean) << "," << Num(p.gain_std) << ","
            << Num(p.sr_mean) << "," << Num(p.sr_std) << "\n";
      }
      if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace ldprank
