/*
 * Copyright 2026 The irkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "irkit/tabular/cell_stats.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "irkit/core/error.h"

namespace irkit::tabular {

Gaussian fit_gaussian(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::max(std::sqrt(var), kMinStd)};
}

double CellEntry::proportion(std::size_t c) const {
  if (members.empty()) throw InfeasibleError("proportion of an empty cell");
  return static_cast<double>(label_counts.at(c)) /
         static_cast<double>(members.size());
}

std::size_t CellStats::total() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.count();
  return n;
}

std::vector<FeatureSummary> summarize_features(const TabularDataset& ds) {
  std::vector<FeatureSummary> out(ds.arity());
  for (std::size_t j = 0; j < ds.arity(); ++j) {
    const auto col = ds.column(j);
    auto& s = out[j];
    s.global = fit_gaussian(col);
    if (!col.empty()) {
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      s.min = *lo;
      s.max = *hi;
    }
    if (ds.schema().is_categorical(j)) {
      s.category_freq.assign(ds.schema()[j].categories.size(), 0.0);
      for (const double v : col) s.category_freq[static_cast<std::size_t>(v)] += 1.0;
      for (auto& f : s.category_freq) f /= static_cast<double>(col.size());
    }
  }
  return out;
}

namespace {

void fill_targets(const TabularDataset& ds, CellEntry& cell) {
  const Target& t = ds.target();
  const std::size_t n = cell.members.size();
  auto moments = [&](std::size_t width, auto value) {
    cell.target_mean.assign(width, 0.0);
    cell.target_var.assign(width, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
      double mean = 0.0;
      for (const std::size_t i : cell.members) mean += value(i, k);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (const std::size_t i : cell.members) {
        const double d = value(i, k) - mean;
        var += d * d;
      }
      cell.target_mean[k] = mean;
      cell.target_var[k] = var / static_cast<double>(n);
    }
  };
  switch (t.kind()) {
    case TargetKind::kLabels:
    case TargetKind::kProbabilities:
      cell.label_counts.assign(t.num_classes(), 0);
      for (const std::size_t i : cell.members) ++cell.label_counts[t.labels()[i]];
      if (t.kind() == TargetKind::kProbabilities) {
        moments(t.num_classes(), [&](std::size_t i, std::size_t k) {
          return t.probabilities()[i][k];
        });
      } else {
        moments(t.num_classes(), [&](std::size_t i, std::size_t k) {
          return t.labels()[i] == static_cast<int>(k) ? 1.0 : 0.0;
        });
      }
      break;
    case TargetKind::kNumeric:
      moments(1, [&](std::size_t i, std::size_t) { return t.numeric()[i]; });
      break;
    case TargetKind::kNone:
      break;
  }
}

}  // namespace

CellStats group_cells(const TabularDataset& ds,
                      const std::vector<std::vector<std::uint32_t>>& keys) {
  if (keys.size() != ds.size()) {
    throw ShapeError("one cell key per row is required");
  }
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < keys.size(); ++i) groups[keys[i]].push_back(i);

  CellStats stats;
  stats.target_kind = ds.target().kind();
  stats.num_classes = ds.target().num_classes();
  stats.features = summarize_features(ds);
  stats.cells.reserve(groups.size());
  std::vector<double> values;
  for (auto& [key, members] : groups) {
    CellEntry cell;
    cell.key = key;
    cell.members = std::move(members);
    cell.feature_fit.resize(ds.arity());
    for (std::size_t j = 0; j < ds.arity(); ++j) {
      values.clear();
      for (const std::size_t i : cell.members) values.push_back(ds.row(i)[j]);
      cell.feature_fit[j] = fit_gaussian(values);
    }
    fill_targets(ds, cell);
    stats.cells.push_back(std::move(cell));
  }
  return stats;
}

CellStats fit_cell_stats(const TabularDataset& ds, const Discretization& d) {
  std::vector<std::vector<std::uint32_t>> keys;
  keys.reserve(ds.size());
  for (const auto& row : ds.rows()) keys.push_back(discretize_instance(row, d).bins);
  CellStats stats = group_cells(ds, keys);

  stats.bins.resize(d.arity());
  for (std::size_t j = 0; j < d.arity(); ++j) {
    std::vector<std::vector<double>> per_bin(d.bin_count(j));
    for (std::size_t i = 0; i < ds.size(); ++i) {
      per_bin[keys[i][j]].push_back(ds.row(i)[j]);
    }
    stats.bins[j].resize(d.bin_count(j));
    for (std::size_t b = 0; b < per_bin.size(); ++b) {
      stats.bins[j][b] = {per_bin[b].size(), fit_gaussian(per_bin[b])};
    }
  }
  return stats;
}

CellStats fit_binary_cell_stats(const TabularDataset& ds,
                                const Discretization& d, const Anchor& anchor) {
  std::vector<std::vector<std::uint32_t>> keys;
  keys.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    const BinaryIR b = binarize(discretize_instance(row, d), anchor);
    keys.emplace_back(b.bits.begin(), b.bits.end());
  }
  return group_cells(ds, keys);
}

double gini_impurity(const CellEntry& cell) {
  if (cell.members.empty()) throw InfeasibleError("Gini impurity of an empty cell");
  if (cell.label_counts.empty()) {
    throw DomainError("Gini impurity needs crisp labels");
  }
  const double n = static_cast<double>(cell.members.size());
  double g = 0.0;
  for (const std::size_t c : cell.label_counts) {
    const double p = static_cast<double>(c) / n;
    g += p * (1.0 - p);
  }
  return g;
}

double mse_uniformity(const CellEntry& cell) {
  if (cell.members.empty()) throw InfeasibleError("MSE of an empty cell");
  if (cell.target_var.empty()) throw DomainError("MSE needs a target");
  double s = 0.0;
  for (const double v : cell.target_var) s += v;
  return s;
}

double cell_score(const CellEntry& cell, Metric metric) {
  return metric == Metric::kGini ? gini_impurity(cell) : mse_uniformity(cell);
}

double weighted_quality(std::span<const CellEntry> cells, Metric metric) {
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& c : cells) {
    if (c.members.empty()) continue;
    weighted += static_cast<double>(c.count()) * cell_score(c, metric);
    total += c.count();
  }
  if (total == 0) throw InfeasibleError("weighted quality of an empty partition");
  return weighted / static_cast<double>(total);
}

Metric default_metric(TargetKind kind) {
  return kind == TargetKind::kLabels ? Metric::kGini : Metric::kMse;
}

}  // namespace irkit::tabular
