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

#include "irkit/tree/tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"

namespace irkit::tree {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// A split must remove at least this fraction of its parent's impurity.
constexpr double kMinRelativeGain = 1e-10;
// Gains closer than this (relative) are ties.
constexpr double kTieTolerance = 1e-12;
// Impurity below this fraction of the root's counts as pure; it is rounding
// noise of constant targets.
constexpr double kPureFraction = 1e-12;

struct SplitCandidate {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

}  // namespace

bool Box::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(lower[j] <= x[j] && x[j] < upper[j])) return false;
  }
  return true;
}

class TreeBuilder {
 public:
  TreeBuilder(const TabularDataset& ds, Criterion criterion,
              std::size_t min_leaf)
      : ds_(ds), criterion_(criterion), min_leaf_(min_leaf) {
    const Target& t = ds.target();
    if (criterion == Criterion::kGini) {
      if (t.kind() != TargetKind::kLabels &&
          t.kind() != TargetKind::kProbabilities) {
        throw DomainError("Gini trees need crisp labels");
      }
      labels_ = t.labels();
      classes_ = t.num_classes();
    } else {
      switch (t.kind()) {
        case TargetKind::kNumeric:
          outputs_ = 1;
          y_.resize(ds.size());
          for (std::size_t i = 0; i < ds.size(); ++i) y_[i] = {t.numeric()[i]};
          break;
        case TargetKind::kProbabilities:
          outputs_ = t.num_classes();
          y_ = t.probabilities();
          break;
        case TargetKind::kLabels:
          outputs_ = t.num_classes();
          y_.assign(ds.size(), std::vector<double>(outputs_, 0.0));
          for (std::size_t i = 0; i < ds.size(); ++i) y_[i][t.labels()[i]] = 1.0;
          break;
        case TargetKind::kNone:
          throw DomainError("MSE trees need a target");
      }
    }
  }

  TreePartition build(std::size_t max_leaves) {
    TreePartition tree;
    tree.arity_ = ds_.arity();
    tree.criterion_ = criterion_;

    std::vector<std::size_t> all(ds_.size());
    std::iota(all.begin(), all.end(), 0);
    tree.nodes_.push_back(make_leaf(std::move(all)));
    pure_floor_ = kPureFraction * weighted(tree.nodes_[0]);
    std::vector<SplitCandidate> best{find_split(tree.nodes_[0])};

    const double n = static_cast<double>(ds_.size());
    double total = weighted(tree.nodes_[0]);
    const double scale = std::max(total, std::numeric_limits<double>::min());
    tree.impurity_path_.push_back(total / n);
    std::size_t leaves = 1;

    while (leaves < max_leaves) {
      int chosen = -1;
      for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
        if (!tree.nodes_[i].is_leaf || !best[i].valid) continue;
        if (chosen < 0 ||
            best[i].decrease > best[chosen].decrease + kTieTolerance * scale) {
          chosen = static_cast<int>(i);
        }
      }
      if (chosen < 0) break;

      const SplitCandidate split = best[chosen];
      std::vector<std::size_t> left_rows, right_rows;
      for (const std::size_t r : tree.nodes_[chosen].members) {
        (ds_.row(r)[split.feature] < split.threshold ? left_rows : right_rows)
            .push_back(r);
      }
      TreeNode left = make_leaf(std::move(left_rows));
      TreeNode right = make_leaf(std::move(right_rows));
      total += weighted(left) + weighted(right) - weighted(tree.nodes_[chosen]);
      total = std::max(total, 0.0);

      const int left_index = static_cast<int>(tree.nodes_.size());
      tree.nodes_.push_back(std::move(left));
      tree.nodes_.push_back(std::move(right));
      best.push_back(find_split(tree.nodes_[left_index]));
      best.push_back(find_split(tree.nodes_[left_index + 1]));

      TreeNode& parent = tree.nodes_[chosen];
      parent.is_leaf = false;
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.left = left_index;
      parent.right = left_index + 1;
      parent.members.clear();
      parent.members.shrink_to_fit();
      parent.summary = {};

      ++leaves;
      tree.impurity_path_.push_back(total / n);
    }

    // Leaf ids in left-to-right order.
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      TreeNode& node = tree.nodes_[i];
      if (node.is_leaf) {
        node.leaf_id = tree.leaf_nodes_.size();
        tree.leaf_nodes_.push_back(static_cast<std::size_t>(i));
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
    return tree;
  }

 private:
  TreeNode make_leaf(std::vector<std::size_t> members) const {
    TreeNode node;
    node.members = std::move(members);
    LeafSummary& s = node.summary;
    s.count = node.members.size();
    const double m = static_cast<double>(s.count);
    if (criterion_ == Criterion::kGini) {
      s.label_counts.assign(classes_, 0);
      for (const std::size_t r : node.members) ++s.label_counts[labels_[r]];
      double g = 0.0;
      for (const std::size_t c : s.label_counts) {
        const double p = static_cast<double>(c) / m;
        g += p * (1.0 - p);
      }
      s.impurity = g;
    } else {
      s.mean.assign(outputs_, 0.0);
      double l = 0.0;
      for (std::size_t k = 0; k < outputs_; ++k) {
        double mean = 0.0;
        for (const std::size_t r : node.members) mean += y_[r][k];
        mean /= m;
        double var = 0.0;
        for (const std::size_t r : node.members) {
          const double d = y_[r][k] - mean;
          var += d * d;
        }
        s.mean[k] = mean;
        l += var / m;
      }
      s.impurity = l;
    }
    return node;
  }

  static double weighted(const TreeNode& leaf) {
    return static_cast<double>(leaf.summary.count) * leaf.summary.impurity;
  }

  SplitCandidate find_split(const TreeNode& node) const {
    SplitCandidate best;
    const std::size_t m = node.members.size();
    const double parent = weighted(node);
    if (m < 2 * min_leaf_ || parent <= pure_floor_) return best;
    const double min_gain = std::max(kMinRelativeGain * parent, pure_floor_);
    const double tie = kTieTolerance * parent;

    std::vector<std::size_t> order(node.members);
    // Centred targets keep the prefix-sum variance formula well conditioned.
    std::vector<double> centre(outputs_, 0.0);
    for (std::size_t k = 0; k < outputs_; ++k) centre[k] = node.summary.mean[k];
    std::vector<double> total_sum(outputs_, 0.0), total_sq(outputs_, 0.0);
    if (criterion_ == Criterion::kMse) {
      for (const std::size_t r : order) {
        for (std::size_t k = 0; k < outputs_; ++k) {
          const double v = y_[r][k] - centre[k];
          total_sum[k] += v;
          total_sq[k] += v * v;
        }
      }
    }
    std::vector<std::size_t> left_counts(classes_), right_counts(classes_);
    std::vector<double> left_sum(outputs_), left_sq(outputs_);

    for (std::size_t j = 0; j < ds_.arity(); ++j) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = ds_.row(a)[j], vb = ds_.row(b)[j];
        return va < vb || (va == vb && a < b);
      });
      if (ds_.row(order.front())[j] == ds_.row(order.back())[j]) continue;
      if (criterion_ == Criterion::kGini) {
        std::fill(left_counts.begin(), left_counts.end(), 0);
        right_counts = node.summary.label_counts;
      } else {
        std::fill(left_sum.begin(), left_sum.end(), 0.0);
        std::fill(left_sq.begin(), left_sq.end(), 0.0);
      }
      for (std::size_t i = 1; i < m; ++i) {
        const std::size_t moved = order[i - 1];
        if (criterion_ == Criterion::kGini) {
          ++left_counts[labels_[moved]];
          --right_counts[labels_[moved]];
        } else {
          for (std::size_t k = 0; k < outputs_; ++k) {
            const double v = y_[moved][k] - centre[k];
            left_sum[k] += v;
            left_sq[k] += v * v;
          }
        }
        const double lo = ds_.row(order[i - 1])[j];
        const double hi = ds_.row(order[i])[j];
        if (!(lo < hi) || i < min_leaf_ || m - i < min_leaf_) continue;

        const double nl = static_cast<double>(i);
        const double nr = static_cast<double>(m - i);
        double children = 0.0;
        if (criterion_ == Criterion::kGini) {
          double ql = 0.0, qr = 0.0;
          for (std::size_t c = 0; c < classes_; ++c) {
            ql += static_cast<double>(left_counts[c]) * left_counts[c];
            qr += static_cast<double>(right_counts[c]) * right_counts[c];
          }
          children = (nl - ql / nl) + (nr - qr / nr);
        } else {
          for (std::size_t k = 0; k < outputs_; ++k) {
            const double rs = total_sum[k] - left_sum[k];
            const double rq = total_sq[k] - left_sq[k];
            children += std::max(left_sq[k] - left_sum[k] * left_sum[k] / nl, 0.0) +
                        std::max(rq - rs * rs / nr, 0.0);
          }
        }
        const double decrease = parent - children;
        if (decrease <= min_gain) continue;
        if (!best.valid || decrease > best.decrease + tie) {
          double t = lo + (hi - lo) / 2.0;
          if (!(t > lo)) t = hi;
          best = {true, j, t, decrease};
        }
      }
    }
    return best;
  }

  const TabularDataset& ds_;
  Criterion criterion_;
  std::size_t min_leaf_;
  std::vector<int> labels_;
  std::size_t classes_ = 0;
  std::vector<std::vector<double>> y_;
  std::size_t outputs_ = 0;
  double pure_floor_ = 0.0;
};

TreePartition fit_tree(const TabularDataset& ds, Criterion criterion,
                       std::size_t max_leaves, std::size_t min_leaf) {
  if (max_leaves < 2) throw ParameterError("max_leaves must be >= 2");
  if (min_leaf < 1) throw ParameterError("min_leaf must be >= 1");
  if (ds.size() == 0) throw ParameterError("cannot fit a tree on an empty dataset");
  return TreeBuilder(ds, criterion, min_leaf).build(max_leaves);
}

std::size_t TreePartition::route(std::span<const double> x) const {
  if (x.size() != arity_) throw ShapeError("routing an instance of the wrong width");
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf) {
    node = &nodes_[x[node->feature] < node->threshold ? node->left : node->right];
  }
  return node->leaf_id;
}

Box TreePartition::leaf_box(std::size_t leaf_id) const {
  Box box{std::vector<double>(arity_, -kInf), std::vector<double>(arity_, kInf)};
  // Walk down from the root following the leaf's position.
  std::vector<int> parent(nodes_.size(), -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_leaf) {
      parent[nodes_[i].left] = static_cast<int>(i);
      parent[nodes_[i].right] = static_cast<int>(i);
    }
  }
  int child = static_cast<int>(leaf_nodes_.at(leaf_id));
  while (parent[child] >= 0) {
    const TreeNode& p = nodes_[parent[child]];
    if (p.left == child) {
      box.upper[p.feature] = std::min(box.upper[p.feature], p.threshold);
    } else {
      box.lower[p.feature] = std::max(box.lower[p.feature], p.threshold);
    }
    child = parent[child];
  }
  return box;
}

std::vector<std::vector<double>> TreePartition::thresholds() const {
  std::vector<std::vector<double>> out(arity_);
  for (const auto& n : nodes_) {
    if (!n.is_leaf) out[n.feature].push_back(n.threshold);
  }
  for (auto& t : out) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  return out;
}

tabular::Discretization TreePartition::to_discretization(
    const FeatureSchema& schema) const {
  return tabular::Discretization(schema, thresholds(),
                                 tabular::BinClosure::kLeftClosed);
}

std::vector<std::string> TreePartition::rules(const FeatureSchema& schema) const {
  std::vector<std::string> out;
  for (std::size_t leaf = 0; leaf < leaf_count(); ++leaf) {
    const Box box = leaf_box(leaf);
    std::string rule;
    for (std::size_t j = 0; j < arity_; ++j) {
      const std::string& name = schema[j].name;
      if (std::isfinite(box.lower[j])) {
        if (!rule.empty()) rule += " ∧ ";
        rule += name + " ≥ " + format_double(box.lower[j]);
      }
      if (std::isfinite(box.upper[j])) {
        if (!rule.empty()) rule += " ∧ ";
        rule += name + " < " + format_double(box.upper[j]);
      }
    }
    if (rule.empty()) rule = "true";
    out.push_back(rule + " → leaf " + std::to_string(leaf));
  }
  return out;
}

namespace {

nlohmann::json node_json(const TreePartition& t, int index,
                         const FeatureSchema& schema) {
  const TreeNode& n = t.nodes()[index];
  if (n.is_leaf) {
    nlohmann::json leaf = {{"leaf", n.leaf_id},
                           {"count", n.summary.count},
                           {"impurity", n.summary.impurity}};
    if (!n.summary.label_counts.empty()) leaf["label_counts"] = n.summary.label_counts;
    if (!n.summary.mean.empty()) leaf["mean"] = n.summary.mean;
    return leaf;
  }
  return {{"feature", schema[n.feature].name},
          {"feature_index", n.feature},
          {"threshold", n.threshold},
          {"left", node_json(t, n.left, schema)},
          {"right", node_json(t, n.right, schema)}};
}

}  // namespace

nlohmann::json TreePartition::to_json(const FeatureSchema& schema) const {
  return {{"criterion", criterion_ == Criterion::kGini ? "gini" : "mse"},
          {"leaves", leaf_count()},
          {"training_impurity", training_quality()},
          {"root", node_json(*this, 0, schema)}};
}

tabular::CellStats leaves_to_cells(const TreePartition& t,
                                   const TabularDataset& ds) {
  std::vector<std::vector<std::uint32_t>> keys;
  keys.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    keys.push_back({static_cast<std::uint32_t>(t.route(row))});
  }
  return tabular::group_cells(ds, keys);
}

Criterion default_criterion(TargetKind kind) {
  return kind == TargetKind::kLabels ? Criterion::kGini : Criterion::kMse;
}

}  // namespace irkit::tree
