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

#ifndef IRKIT_SURROGATE_EXPLAIN_H_
#define IRKIT_SURROGATE_EXPLAIN_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "irkit/core/blackbox.h"
#include "irkit/core/dataset.h"
#include "irkit/core/rng.h"
#include "irkit/surrogate/ols.h"
#include "irkit/tabular/discretization.h"
#include "irkit/tabular/sampling.h"
#include "irkit/tree/tree.h"
#include "json.hpp"

namespace irkit::surrogate {

// How the interpretable representation is built: quantile bins of the data
// ("quantile:q") or the thresholds of a tree fitted to the black box's
// labelling of the data ("tree:max_leaves").
struct IrSpec {
  enum class Kind { kQuantile, kTree };
  Kind kind = Kind::kQuantile;
  std::size_t param = 4;

  // ParameterError on malformed text.
  static IrSpec Parse(std::string_view text);
  std::string str() const;
};

enum class SurrogateKind { kOls, kTree };
enum class TargetMode { kProbability, kCrisp };

struct SurrogateConfig {
  std::size_t n = 1000;
  tabular::SamplerConfig sampler;
  // Explained class; defaults to the black box's top class for the anchor.
  std::optional<std::size_t> target_class;
  TargetMode target_mode = TargetMode::kProbability;
  // > 0 enables exp(-d^2 / width^2) weights, d the normalized Hamming
  // distance to the all-1 vector.
  double kernel_width = 0.0;
  SurrogateKind kind = SurrogateKind::kOls;
  std::size_t tree_max_leaves = 8;
  // Minimum leaf size of the class-aware tree that builds the IR.
  std::size_t ir_min_leaf = 5;
};

struct Concept {
  std::size_t feature = 0;
  std::string name;
  std::string description;
  double coefficient = 0.0;
};

struct LinearExplanation {
  double intercept = 0.0;
  // In feature order.
  std::vector<Concept> concepts;
  // Sorted by |coefficient| descending; ties keep feature order.
  std::vector<Concept> ranked() const;
};

struct TreeSurrogate {
  tree::TreePartition tree;
  double training_quality = 0.0;
};

struct Explanation {
  IrSpec ir;
  tabular::Discretization discretization;
  tabular::Anchor anchor;
  std::size_t target_class = 0;
  std::string target_class_name;
  double anchor_prediction = 0.0;
  std::size_t samples = 0;
  std::optional<LinearExplanation> linear;
  std::optional<TreeSurrogate> tree;

  nlohmann::json to_json() const;
  // concept,description,coefficient rows in ranked order (OLS only).
  void write_csv(std::ostream& out) const;
};

// Surrogate tree over samples in the original domain. Crisp labels grow a
// Gini tree, numeric targets an MSE tree.
TreeSurrogate fit_surrogate_tree(const std::vector<Instance>& x,
                                 const FeatureSchema& schema,
                                 const Target& y, std::size_t max_leaves,
                                 std::size_t min_leaf = 1);

tabular::Discretization build_ir(const IrSpec& ir, BlackBox& bb,
                                 const TabularDataset& ds,
                                 std::size_t tree_min_leaf = 5);

// Discretize, sample around the anchor, label with the black box and fit the
// surrogate on the binary views. Concepts constant over the whole sample
// (single-bin features, or a sampler that never leaves the anchor's bin)
// are excluded from the OLS fit and reported with coefficient 0. ConfigError when an OLS surrogate gets
// fewer than arity + 1 samples.
Explanation explain_tabular(const Instance& x, BlackBox& bb,
                            const TabularDataset& ds, const IrSpec& ir,
                            const SurrogateConfig& config, RngStream& rng);

}  // namespace irkit::surrogate

#endif  // IRKIT_SURROGATE_EXPLAIN_H_
