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

#ifndef IRKIT_TREE_TREE_H_
#define IRKIT_TREE_TREE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "irkit/core/dataset.h"
#include "irkit/tabular/cell_stats.h"
#include "irkit/tabular/discretization.h"
#include "json.hpp"

namespace irkit::tree {

enum class Criterion { kGini, kMse };

struct LeafSummary {
  std::size_t count = 0;
  std::vector<std::size_t> label_counts;  // Gini trees
  std::vector<double> mean;               // per output (MSE trees)
  double impurity = 0.0;                  // L(H) of the leaf
};

// A node is a split (x[feature] < threshold goes left) or a leaf.
struct TreeNode {
  bool is_leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Leaves only.
  std::size_t leaf_id = 0;
  std::vector<std::size_t> members;
  LeafSummary summary;
};

// Axis-aligned box: lower[j] <= x[j] < upper[j], with infinite sides allowed.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  bool contains(std::span<const double> x) const;
};

class TreePartition {
 public:
  TreePartition() = default;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  std::size_t leaf_count() const { return leaf_nodes_.size(); }
  const TreeNode& leaf(std::size_t leaf_id) const {
    return nodes_[leaf_nodes_[leaf_id]];
  }
  std::size_t arity() const { return arity_; }
  Criterion criterion() const { return criterion_; }

  // Leaf id reached by x.
  std::size_t route(std::span<const double> x) const;
  Box leaf_box(std::size_t leaf_id) const;

  // impurity_path()[k] is the weighted training impurity with k + 1 leaves,
  // tracked incrementally during growth. Because growth is best-first, the
  // tree truncated to w leaves is exactly the tree fitted with max_leaves = w.
  const std::vector<double>& impurity_path() const { return impurity_path_; }
  double training_quality() const { return impurity_path_.back(); }

  // Distinct thresholds used per feature, ascending.
  std::vector<std::vector<double>> thresholds() const;
  // Per-feature thresholds as a left-closed discretization.
  tabular::Discretization to_discretization(const FeatureSchema& schema) const;

  // "x3 < 2.45 ∧ x1 ≥ 7 → leaf 4", one line per leaf.
  std::vector<std::string> rules(const FeatureSchema& schema) const;
  nlohmann::json to_json(const FeatureSchema& schema) const;

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> leaf_nodes_;  // node index per leaf id
  std::vector<double> impurity_path_;
  std::size_t arity_ = 0;
  Criterion criterion_ = Criterion::kGini;
};

// Best-first greedy growth. Candidate thresholds are midpoints between
// consecutive distinct values; the frontier leaf with the largest
// count-weighted impurity decrease is split next; ties go to the lower
// feature index, then the lower threshold, then the older leaf. Growth stops
// at max_leaves or when no split reduces impurity.
//
// Gini needs crisp labels (probabilistic targets use their argmax); MSE
// accepts numeric targets, sums per-class MSE for probabilities and uses
// one-hot indicators for labels.
TreePartition fit_tree(const TabularDataset& ds, Criterion criterion,
                       std::size_t max_leaves, std::size_t min_leaf = 1);

// Rows of `ds` grouped by the leaf they reach, keyed by leaf id.
tabular::CellStats leaves_to_cells(const TreePartition& t,
                                   const TabularDataset& ds);

Criterion default_criterion(TargetKind kind);

}  // namespace irkit::tree

#endif  // IRKIT_TREE_TREE_H_
