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

#ifndef IRKIT_EXPERIMENTS_PURITY_BENCHMARK_H_
#define IRKIT_EXPERIMENTS_PURITY_BENCHMARK_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "irkit/core/dataset.h"
#include "irkit/tabular/cell_stats.h"
#include "irkit/tabular/sampling.h"
#include "json.hpp"

namespace irkit::experiments {

struct PurityBenchConfig {
  std::vector<std::size_t> widths{2, 4, 8, 16, 32, 64, 128, 256};
  // Neighbourhood radius as a fraction of the largest pairwise distance.
  double radius_fraction = 0.6;
  int q = 4;
  // Euclidean distance on z-scored features instead of raw values.
  bool standardize = false;
  std::size_t min_leaf = 1;
  bool local = true;
  std::size_t jobs = 1;
};

struct WidthPoint {
  std::size_t width = 0;
  double tree_global = 0.0;
  double tree_local_mean = 0.0;
  double tree_local_std = 0.0;
};

struct PurityResult {
  tabular::Metric metric = tabular::Metric::kGini;
  double quartile_global = 0.0;
  double quartile_local_mean = 0.0;
  double quartile_local_std = 0.0;
  std::vector<WidthPoint> points;  // config width order
  tabular::EncodingCount encodings;
  // Leaves actually grown by the global tree at its largest width.
  std::size_t tree_global_leaves = 0;
  std::size_t local_instances = 0;
  std::size_t local_skipped = 0;
  double radius = 0.0;

  // Smallest configured width whose global tree is strictly purer than the
  // quantile grid.
  std::optional<std::size_t> crossover_width() const;
  nlohmann::json to_json() const;
};

// Purity of quantile and tree representations, globally over the whole
// dataset and locally within each instance's neighbourhood (mean and
// population std over instances). Ground-truth targets are scored: Gini for
// labels, MSE for numeric targets. Local quantile cells use the global edges
// binarized relative to the instance. Instances whose neighbourhood has
// fewer than 2 points are skipped and counted.
PurityResult purity_benchmark(const TabularDataset& ds,
                              const PurityBenchConfig& config);

// width,quartile_global,quartile_local_mean,quartile_local_std,
// tree_global,tree_local_mean,tree_local_std
void write_purity_csv(std::ostream& out, const PurityResult& result);

}  // namespace irkit::experiments

#endif  // IRKIT_EXPERIMENTS_PURITY_BENCHMARK_H_
