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

#ifndef IRKIT_TABULAR_DISCRETIZATION_H_
#define IRKIT_TABULAR_DISCRETIZATION_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irkit/core/binary_ir.h"
#include "irkit/core/dataset.h"
#include "json.hpp"

namespace irkit::tabular {

// Which side of a numerical bin is closed.
//   kLeftClosed:  [e_{i-1}, e_i)   e.g. "5 <= x2 < 7"
//   kRightClosed: (e_{i-1}, e_i]   e.g. "40 < x2 <= 80"
// The outer bins are unbounded in both conventions.
enum class BinClosure { kLeftClosed, kRightClosed };

struct Interval {
  double lower;  // -inf when unbounded
  double upper;  // +inf when unbounded
};

// Per-feature partition. Numerical features carry strictly increasing edges
// (k edges -> k + 1 bins); categorical features map every category to its own
// bin.
class Discretization {
 public:
  Discretization() = default;
  // `edges[j]` is ignored for categorical features.
  Discretization(FeatureSchema schema, std::vector<std::vector<double>> edges,
                 BinClosure closure = BinClosure::kLeftClosed);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t arity() const { return schema_.arity(); }
  BinClosure closure() const { return closure_; }
  const std::vector<double>& edges(std::size_t j) const { return edges_[j]; }
  std::size_t bin_count(std::size_t j) const;

  // Index of the bin holding `value` for feature j.
  std::size_t bin_of(std::size_t j, double value) const;
  Interval bin_interval(std::size_t j, std::size_t bin) const;
  // Human-readable concept, e.g. "40 < bmi <= 80", "75 <= x1", "colour = red".
  std::string describe_bin(std::size_t j, std::size_t bin) const;

  nlohmann::json to_json() const;
  static Discretization from_json(const nlohmann::json& j,
                                  const FeatureSchema& schema);

 private:
  FeatureSchema schema_;
  std::vector<std::vector<double>> edges_;
  BinClosure closure_ = BinClosure::kLeftClosed;
};

// x' : per-feature bin index.
struct DiscreteCoords {
  std::vector<std::uint32_t> bins;
  std::size_t size() const { return bins.size(); }
  std::uint32_t operator[](std::size_t j) const { return bins[j]; }
  friend auto operator<=>(const DiscreteCoords&, const DiscreteCoords&) = default;
};

// x* : 1 where the feature falls in the anchor's bin.
using irkit::BinaryIR;

// The explained instance together with its discrete coordinates.
struct Anchor {
  Instance instance;
  DiscreteCoords coords;

  static Anchor Make(Instance x, const Discretization& d);
};

// Type-7 sample quantiles at i/q (i = 1..q-1), duplicates collapsed.
std::vector<double> quantile_edges(std::span<const double> values, int q);

// Quantile discretization of every numerical feature. ParameterError if q < 2.
// Right-closed by default, which is the convention under which the quartile
// encoding counts of the benchmark datasets are reported.
Discretization quantile_discretize(const TabularDataset& ds, int q,
                                   BinClosure closure = BinClosure::kRightClosed);

DiscreteCoords discretize_instance(std::span<const double> x,
                                   const Discretization& d);

// ShapeError on arity mismatch.
BinaryIR binarize(const DiscreteCoords& c, const Anchor& a);

}  // namespace irkit::tabular

#endif  // IRKIT_TABULAR_DISCRETIZATION_H_
