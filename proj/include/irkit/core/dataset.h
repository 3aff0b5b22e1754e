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

#ifndef IRKIT_CORE_DATASET_H_
#define IRKIT_CORE_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irkit {

enum class FeatureKind { kNumerical, kCategorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumerical;
  // Ordered category values; only meaningful for categorical features.
  std::vector<std::string> categories;
};

// Ordered list of named features. Names are unique; categorical features
// carry a non-empty, duplicate-free category list.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> features);

  // Convenience: all features numerical.
  static FeatureSchema Numerical(const std::vector<std::string>& names);

  std::size_t arity() const { return features_.size(); }
  const FeatureSpec& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<FeatureSpec>& features() const { return features_; }
  bool is_categorical(std::size_t i) const {
    return features_[i].kind == FeatureKind::kCategorical;
  }

  std::optional<std::size_t> index_of(std::string_view name) const;
  // Index of `value` in feature i's category list; DomainError if absent.
  std::size_t category_index(std::size_t i, std::string_view value) const;

  friend bool operator==(const FeatureSchema& a, const FeatureSchema& b);

 private:
  std::vector<FeatureSpec> features_;
};

bool operator==(const FeatureSpec& a, const FeatureSpec& b);

// One data point. Categorical features hold their category index.
using Instance = std::vector<double>;

// Row-stochastic matrix, one row per instance.
using ProbabilityMatrix = std::vector<std::vector<double>>;

enum class TargetKind { kNone, kLabels, kProbabilities, kNumeric };

// Prediction target of a dataset: crisp class labels, per-class probability
// vectors, or a numeric (regression) response.
class Target {
 public:
  Target() = default;
  static Target Labels(std::vector<int> labels,
                       std::vector<std::string> class_names);
  static Target Probabilities(ProbabilityMatrix probabilities,
                              std::vector<std::string> class_names);
  static Target Numeric(std::vector<double> values);

  TargetKind kind() const { return kind_; }
  std::size_t size() const;
  std::size_t num_classes() const { return class_names_.size(); }
  const std::vector<std::string>& class_names() const { return class_names_; }

  // Crisp labels. For probabilistic targets these are the argmax, ties broken
  // toward the lowest class index.
  const std::vector<int>& labels() const { return labels_; }
  const ProbabilityMatrix& probabilities() const { return probabilities_; }
  const std::vector<double>& numeric() const { return numeric_; }

  Target subset(std::span<const std::size_t> indices) const;

 private:
  TargetKind kind_ = TargetKind::kNone;
  std::vector<std::string> class_names_;
  std::vector<int> labels_;
  ProbabilityMatrix probabilities_;
  std::vector<double> numeric_;
};

// argmax with ties resolved toward the lowest index.
int argmax(std::span<const double> values);

class TabularDataset {
 public:
  TabularDataset() = default;
  TabularDataset(FeatureSchema schema, std::vector<Instance> rows,
                 Target target);

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<Instance>& rows() const { return rows_; }
  const Instance& row(std::size_t i) const { return rows_[i]; }
  std::size_t size() const { return rows_.size(); }
  std::size_t arity() const { return schema_.arity(); }
  const Target& target() const { return target_; }

  std::vector<double> column(std::size_t j) const;
  TabularDataset subset(std::span<const std::size_t> indices) const;
  TabularDataset with_target(Target target) const;

 private:
  FeatureSchema schema_;
  std::vector<Instance> rows_;
  Target target_;
};

// Validates that `x` conforms to `schema` (arity, category indices).
void check_instance(const FeatureSchema& schema, std::span<const double> x);

enum class TargetParse { kLabels, kNumeric };

// Reads a UTF-8, comma-separated file with a header row. Columns are matched
// to the schema by name; columns not named by the schema or the target are
// ignored. Numbers are parsed locale-independently.
//
// Errors: SchemaError (missing column), ParseError (bad numeric cell, carrying
// the 1-based file line and column name), DomainError (undeclared category),
// IoError (unreadable file).
TabularDataset load_tabular_csv(const std::filesystem::path& path,
                                const FeatureSchema& schema,
                                std::string_view target_column,
                                TargetParse target_parse = TargetParse::kLabels);

// Locale-independent double parse of the whole string; nullopt on failure.
std::optional<double> parse_double(std::string_view text);

}  // namespace irkit

#endif  // IRKIT_CORE_DATASET_H_
