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

#include "irkit/tabular/discretization.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"

namespace irkit::tabular {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Discretization::Discretization(FeatureSchema schema,
                               std::vector<std::vector<double>> edges,
                               BinClosure closure)
    : schema_(std::move(schema)), edges_(std::move(edges)), closure_(closure) {
  if (edges_.size() != schema_.arity()) {
    throw ShapeError("discretization needs one edge list per feature");
  }
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    if (schema_.is_categorical(j)) {
      edges_[j].clear();
      continue;
    }
    for (std::size_t i = 0; i < edges_[j].size(); ++i) {
      if (!std::isfinite(edges_[j][i])) {
        throw ParameterError("non-finite bin edge for '" + schema_[j].name + "'");
      }
      if (i > 0 && !(edges_[j][i - 1] < edges_[j][i])) {
        throw ParameterError("bin edges of '" + schema_[j].name +
                             "' are not strictly increasing");
      }
    }
  }
}

std::size_t Discretization::bin_count(std::size_t j) const {
  if (schema_.is_categorical(j)) return schema_[j].categories.size();
  return edges_[j].size() + 1;
}

std::size_t Discretization::bin_of(std::size_t j, double value) const {
  if (schema_.is_categorical(j)) {
    const auto n = static_cast<double>(schema_[j].categories.size());
    if (!(value >= 0.0 && value < n) || std::floor(value) != value) {
      throw DomainError("feature '" + schema_[j].name +
                        "' holds an undeclared category index");
    }
    return static_cast<std::size_t>(value);
  }
  const auto& e = edges_[j];
  // Left-closed: number of edges <= value. Right-closed: edges < value.
  const auto it = closure_ == BinClosure::kLeftClosed
                      ? std::upper_bound(e.begin(), e.end(), value)
                      : std::lower_bound(e.begin(), e.end(), value);
  return static_cast<std::size_t>(it - e.begin());
}

Interval Discretization::bin_interval(std::size_t j, std::size_t bin) const {
  if (schema_.is_categorical(j)) {
    return {static_cast<double>(bin), static_cast<double>(bin)};
  }
  const auto& e = edges_[j];
  return {bin == 0 ? -kInf : e[bin - 1], bin == e.size() ? kInf : e[bin]};
}

std::string Discretization::describe_bin(std::size_t j, std::size_t bin) const {
  const std::string& name = schema_[j].name;
  if (schema_.is_categorical(j)) {
    return name + " = " + schema_[j].categories.at(bin);
  }
  const Interval iv = bin_interval(j, bin);
  const bool left = closure_ == BinClosure::kLeftClosed;
  const std::string lo_op = left ? " <= " : " < ";
  const std::string hi_op = left ? " < " : " <= ";
  const bool has_lo = std::isfinite(iv.lower);
  const bool has_hi = std::isfinite(iv.upper);
  if (!has_lo && !has_hi) return name;
  if (!has_lo) return name + hi_op + format_double(iv.upper);
  if (!has_hi) return format_double(iv.lower) + lo_op + name;
  return format_double(iv.lower) + lo_op + name + hi_op +
         format_double(iv.upper);
}

nlohmann::json Discretization::to_json() const {
  nlohmann::json features = nlohmann::json::object();
  for (std::size_t j = 0; j < arity(); ++j) {
    if (schema_.is_categorical(j)) {
      features[schema_[j].name] = schema_[j].categories;
    } else {
      features[schema_[j].name] = edges_[j];
    }
  }
  return {{"closure", closure_ == BinClosure::kLeftClosed ? "left" : "right"},
          {"features", features}};
}

Discretization Discretization::from_json(const nlohmann::json& j,
                                         const FeatureSchema& schema) {
  const auto& features = j.at("features");
  std::vector<std::vector<double>> edges(schema.arity());
  for (std::size_t f = 0; f < schema.arity(); ++f) {
    if (!schema.is_categorical(f)) {
      edges[f] = features.at(schema[f].name).get<std::vector<double>>();
    }
  }
  const BinClosure closure = j.value("closure", std::string("left")) == "right"
                                 ? BinClosure::kRightClosed
                                 : BinClosure::kLeftClosed;
  return Discretization(schema, std::move(edges), closure);
}

Anchor Anchor::Make(Instance x, const Discretization& d) {
  DiscreteCoords c = discretize_instance(x, d);
  return {std::move(x), std::move(c)};
}

std::vector<double> quantile_edges(std::span<const double> values, int q) {
  if (q < 2) throw ParameterError("quantile count q must be >= 2");
  if (values.empty()) return {};
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n1 = static_cast<double>(sorted.size() - 1);
  std::vector<double> edges;
  for (int i = 1; i < q; ++i) {
    const double h = n1 * static_cast<double>(i) / static_cast<double>(q);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    const double v = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    if (edges.empty() || v > edges.back()) edges.push_back(v);
  }
  return edges;
}

Discretization quantile_discretize(const TabularDataset& ds, int q,
                                   BinClosure closure) {
  if (q < 2) throw ParameterError("quantile count q must be >= 2");
  std::vector<std::vector<double>> edges(ds.arity());
  for (std::size_t j = 0; j < ds.arity(); ++j) {
    if (ds.schema().is_categorical(j)) continue;
    const auto col = ds.column(j);
    edges[j] = quantile_edges(col, q);
    // A constant column collapses to one bin.
    if (!col.empty() &&
        std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; })) {
      edges[j].clear();
    }
  }
  return Discretization(ds.schema(), std::move(edges), closure);
}

DiscreteCoords discretize_instance(std::span<const double> x,
                                   const Discretization& d) {
  if (x.size() != d.arity()) {
    throw ShapeError("instance has " + std::to_string(x.size()) +
                     " values, discretization expects " +
                     std::to_string(d.arity()));
  }
  DiscreteCoords c;
  c.bins.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    c.bins[j] = static_cast<std::uint32_t>(d.bin_of(j, x[j]));
  }
  return c;
}

BinaryIR binarize(const DiscreteCoords& c, const Anchor& a) {
  if (c.size() != a.coords.size()) {
    throw ShapeError("coordinates of width " + std::to_string(c.size()) +
                     " cannot be binarized against an anchor of width " +
                     std::to_string(a.coords.size()));
  }
  BinaryIR b;
  b.bits.resize(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    b.bits[j] = c[j] == a.coords[j] ? 1 : 0;
  }
  return b;
}

}  // namespace irkit::tabular
