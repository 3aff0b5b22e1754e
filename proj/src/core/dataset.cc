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

#include "irkit/core/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "irkit/core/error.h"

namespace irkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  // Header cells may be quoted; data cells are not.
  for (auto& cell : out) {
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
      cell = cell.substr(1, cell.size() - 2);
    }
  }
  return out;
}

}  // namespace

bool operator==(const FeatureSpec& a, const FeatureSpec& b) {
  return a.name == b.name && a.kind == b.kind && a.categories == b.categories;
}

bool operator==(const FeatureSchema& a, const FeatureSchema& b) {
  return a.features_ == b.features_;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (!names.insert(f.name).second) {
      throw SchemaError("duplicate feature name '" + f.name + "'");
    }
    if (f.kind == FeatureKind::kCategorical) {
      if (f.categories.empty()) {
        throw SchemaError("categorical feature '" + f.name +
                          "' has no categories");
      }
      std::set<std::string> seen(f.categories.begin(), f.categories.end());
      if (seen.size() != f.categories.size()) {
        throw SchemaError("categorical feature '" + f.name +
                          "' has duplicate categories");
      }
    }
  }
}

FeatureSchema FeatureSchema::Numerical(const std::vector<std::string>& names) {
  std::vector<FeatureSpec> specs;
  specs.reserve(names.size());
  for (const auto& n : names) specs.push_back({n, FeatureKind::kNumerical, {}});
  return FeatureSchema(std::move(specs));
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t FeatureSchema::category_index(std::size_t i,
                                          std::string_view value) const {
  const auto& cats = features_.at(i).categories;
  const auto it = std::find(cats.begin(), cats.end(), value);
  if (it == cats.end()) {
    throw DomainError("value '" + std::string(value) +
                      "' is not a declared category of feature '" +
                      features_[i].name + "'");
  }
  return static_cast<std::size_t>(it - cats.begin());
}

int argmax(std::span<const double> values) {
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

Target Target::Labels(std::vector<int> labels,
                      std::vector<std::string> class_names) {
  for (const int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= class_names.size()) {
      throw DomainError("label " + std::to_string(l) + " outside class set");
    }
  }
  Target t;
  t.kind_ = TargetKind::kLabels;
  t.labels_ = std::move(labels);
  t.class_names_ = std::move(class_names);
  return t;
}

Target Target::Probabilities(ProbabilityMatrix probabilities,
                             std::vector<std::string> class_names) {
  Target t;
  t.kind_ = TargetKind::kProbabilities;
  t.labels_.reserve(probabilities.size());
  for (const auto& row : probabilities) {
    if (row.size() != class_names.size()) {
      throw ShapeError("probability row width differs from class count");
    }
    double sum = 0.0;
    for (const double p : row) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("probability outside [0, 1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DomainError("probability row does not sum to 1");
    }
    t.labels_.push_back(argmax(row));
  }
  t.probabilities_ = std::move(probabilities);
  t.class_names_ = std::move(class_names);
  return t;
}

Target Target::Numeric(std::vector<double> values) {
  Target t;
  t.kind_ = TargetKind::kNumeric;
  t.numeric_ = std::move(values);
  return t;
}

std::size_t Target::size() const {
  switch (kind_) {
    case TargetKind::kLabels:
    case TargetKind::kProbabilities:
      return labels_.size();
    case TargetKind::kNumeric:
      return numeric_.size();
    case TargetKind::kNone:
      break;
  }
  return 0;
}

Target Target::subset(std::span<const std::size_t> indices) const {
  Target t;
  t.kind_ = kind_;
  t.class_names_ = class_names_;
  for (const std::size_t i : indices) {
    if (!labels_.empty()) t.labels_.push_back(labels_[i]);
    if (!probabilities_.empty()) t.probabilities_.push_back(probabilities_[i]);
    if (!numeric_.empty()) t.numeric_.push_back(numeric_[i]);
  }
  return t;
}

void check_instance(const FeatureSchema& schema, std::span<const double> x) {
  if (x.size() != schema.arity()) {
    throw ShapeError("instance has " + std::to_string(x.size()) +
                     " values, schema expects " +
                     std::to_string(schema.arity()));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!schema.is_categorical(j)) continue;
    const double v = x[j];
    const auto n = static_cast<double>(schema[j].categories.size());
    if (!(v >= 0.0 && v < n) || std::floor(v) != v) {
      throw DomainError("feature '" + schema[j].name +
                        "' holds an undeclared category index");
    }
  }
}

TabularDataset::TabularDataset(FeatureSchema schema, std::vector<Instance> rows,
                               Target target)
    : schema_(std::move(schema)),
      rows_(std::move(rows)),
      target_(std::move(target)) {
  for (const auto& r : rows_) check_instance(schema_, r);
  if (target_.kind() != TargetKind::kNone && target_.size() != rows_.size()) {
    throw ShapeError("target length differs from row count");
  }
}

std::vector<double> TabularDataset::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[j]);
  return out;
}

TabularDataset TabularDataset::subset(
    std::span<const std::size_t> indices) const {
  std::vector<Instance> rows;
  rows.reserve(indices.size());
  for (const std::size_t i : indices) rows.push_back(rows_.at(i));
  TabularDataset out;
  out.schema_ = schema_;
  out.rows_ = std::move(rows);
  out.target_ = target_.subset(indices);
  return out;
}

TabularDataset TabularDataset::with_target(Target target) const {
  return TabularDataset(schema_, rows_, std::move(target));
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

TabularDataset load_tabular_csv(const std::filesystem::path& path,
                                const FeatureSchema& schema,
                                std::string_view target_column,
                                TargetParse target_parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("'" + path.string() + "' has no header row");
  }
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_commas(line);
  std::map<std::string, std::size_t, std::less<>> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    column_of.emplace(std::string(header[c]), c);
  }
  std::vector<std::size_t> feature_cols;
  for (const auto& f : schema.features()) {
    const auto it = column_of.find(f.name);
    if (it == column_of.end()) {
      throw SchemaError("column '" + f.name + "' missing from '" +
                        path.string() + "'");
    }
    feature_cols.push_back(it->second);
  }
  const auto target_it = column_of.find(target_column);
  if (target_it == column_of.end()) {
    throw SchemaError("target column '" + std::string(target_column) +
                      "' missing from '" + path.string() + "'");
  }
  const std::size_t target_col = target_it->second;

  std::vector<Instance> rows;
  std::vector<std::string> raw_targets;
  std::vector<double> numeric_targets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(header.size()),
                       line_no, "");
    }
    Instance x(schema.arity());
    for (std::size_t j = 0; j < schema.arity(); ++j) {
      const std::string_view cell = cells[feature_cols[j]];
      if (schema.is_categorical(j)) {
        x[j] = static_cast<double>(schema.category_index(j, cell));
        continue;
      }
      const auto v = parse_double(cell);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no) + ", column \"" +
                             schema[j].name + "\": cannot parse '" +
                             std::string(cell) + "' as a number",
                         line_no, schema[j].name);
      }
      x[j] = *v;
    }
    rows.push_back(std::move(x));
    const std::string_view cell = cells[target_col];
    if (target_parse == TargetParse::kNumeric) {
      const auto v = parse_double(cell);
      if (!v) {
        throw ParseError("line " + std::to_string(line_no) + ", column \"" +
                             std::string(target_column) +
                             "\": cannot parse '" + std::string(cell) +
                             "' as a number",
                         line_no, std::string(target_column));
      }
      numeric_targets.push_back(*v);
    } else {
      raw_targets.emplace_back(cell);
    }
  }

  if (target_parse == TargetParse::kNumeric) {
    return TabularDataset(schema, std::move(rows),
                          Target::Numeric(std::move(numeric_targets)));
  }
  // Class order: numeric order when every label parses as a number, else
  // lexicographic.
  std::vector<std::string> classes(raw_targets.begin(), raw_targets.end());
  const bool all_numeric =
      std::all_of(classes.begin(), classes.end(),
                  [](const std::string& s) { return parse_double(s).has_value(); });
  std::sort(classes.begin(), classes.end(),
            [all_numeric](const std::string& a, const std::string& b) {
              if (all_numeric) return *parse_double(a) < *parse_double(b);
              return a < b;
            });
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<int> labels;
  labels.reserve(raw_targets.size());
  for (const auto& t : raw_targets) {
    labels.push_back(static_cast<int>(
        std::find(classes.begin(), classes.end(), t) - classes.begin()));
  }
  return TabularDataset(schema, std::move(rows),
                        Target::Labels(std::move(labels), std::move(classes)));
}

}  // namespace irkit
