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

#ifndef IRKIT_TABULAR_CELL_STATS_H_
#define IRKIT_TABULAR_CELL_STATS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "irkit/core/dataset.h"
#include "irkit/tabular/discretization.h"

namespace irkit::tabular {

// Population moments; std is floored at 1e-12.
struct Gaussian {
  double mean = 0.0;
  double std = 1e-12;
};

inline constexpr double kMinStd = 1e-12;

Gaussian fit_gaussian(std::span<const double> values);

// One non-empty hyper-rectangle H_i.
struct CellEntry {
  // Cell identity: discrete coordinates, binary code or leaf id.
  std::vector<std::uint32_t> key;
  std::vector<std::size_t> members;  // row indices, ascending
  // Crisp label histogram (labels or argmax of probabilities).
  std::vector<std::size_t> label_counts;
  // Per-class mean/variance for probabilistic targets, one entry for numeric
  // targets, one-hot indicators for crisp labels.
  std::vector<double> target_mean;
  std::vector<double> target_var;
  // Per-feature Gaussian of the members' values.
  std::vector<Gaussian> feature_fit;

  std::size_t count() const { return members.size(); }
  // p_{H_i}(c)
  double proportion(std::size_t c) const;
};

struct BinStats {
  std::size_t count = 0;
  Gaussian fit;
};

struct FeatureSummary {
  Gaussian global;
  double min = 0.0;
  double max = 0.0;
  // Empirical category frequencies (categorical features only).
  std::vector<double> category_freq;
};

std::vector<FeatureSummary> summarize_features(const TabularDataset& ds);

// Per-cell statistics of a dataset under some partition. Cells are stored
// in ascending key order; only non-empty cells are present.
struct CellStats {
  TargetKind target_kind = TargetKind::kNone;
  std::size_t num_classes = 0;
  std::vector<CellEntry> cells;
  std::vector<FeatureSummary> features;
  // Marginal per-(feature, bin) statistics; filled by fit_cell_stats.
  std::vector<std::vector<BinStats>> bins;

  std::size_t total() const;
};

// Groups rows by the given per-row keys.
CellStats group_cells(const TabularDataset& ds,
                      const std::vector<std::vector<std::uint32_t>>& keys);

// Cells keyed by DiscreteCoords, plus per-bin marginal Gaussians.
CellStats fit_cell_stats(const TabularDataset& ds, const Discretization& d);

// Cells keyed by BinaryIR relative to `anchor`.
CellStats fit_binary_cell_stats(const TabularDataset& ds,
                                const Discretization& d, const Anchor& anchor);

enum class Metric { kGini, kMse };

// Sum_c p(c)(1 - p(c)). InfeasibleError on an empty cell, DomainError when
// the target carries no labels.
double gini_impurity(const CellEntry& cell);

// Mean squared deviation from the cell mean; per-class variances are summed
// for probabilistic targets.
double mse_uniformity(const CellEntry& cell);

double cell_score(const CellEntry& cell, Metric metric);

// Q = sum |H_i| L(H_i) / sum |H_i|. InfeasibleError when every cell is empty.
double weighted_quality(std::span<const CellEntry> cells, Metric metric);
inline double weighted_quality(const CellStats& stats, Metric metric) {
  return weighted_quality(stats.cells, metric);
}

// Gini for crisp labels, MSE otherwise.
Metric default_metric(TargetKind kind);

}  // namespace irkit::tabular

#endif  // IRKIT_TABULAR_CELL_STATS_H_
