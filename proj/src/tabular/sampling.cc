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

#include "irkit/tabular/sampling.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"

namespace irkit::tabular {
namespace {

constexpr int kMaxRejections = 100;

// Finite sampling range for the uniform fallback of bin `bin` of feature j.
Interval finite_range(const Discretization& d, std::size_t j, std::size_t bin,
                      const FeatureSummary& f) {
  Interval iv = d.bin_interval(j, bin);
  const double span = std::max(f.global.std, 1.0);
  if (std::isinf(iv.lower) && std::isinf(iv.upper)) return {f.min, f.max};
  if (std::isinf(iv.lower)) iv.lower = std::min(f.min, iv.upper - span);
  if (std::isinf(iv.upper)) iv.upper = std::max(f.max, iv.lower + span);
  return iv;
}

double sample_in_bin(const Discretization& d, std::size_t j, std::size_t bin,
                     const Gaussian& g, const FeatureSummary& f,
                     RngStream& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double v = rng.normal(g.mean, g.std);
    if (d.bin_of(j, v) == bin) return v;
  }
  const Interval iv = finite_range(d, j, bin, f);
  const double u = rng.uniform();
  double v = d.closure() == BinClosure::kLeftClosed
                 ? iv.lower + u * (iv.upper - iv.lower)
                 : iv.upper - u * (iv.upper - iv.lower);
  if (d.bin_of(j, v) != bin) {
    // Rounding pushed the draw across an edge; the closed end always belongs.
    const Interval exact = d.bin_interval(j, bin);
    if (d.closure() == BinClosure::kLeftClosed && std::isfinite(exact.lower)) {
      v = exact.lower;
    } else if (d.closure() == BinClosure::kRightClosed &&
               std::isfinite(exact.upper)) {
      v = exact.upper;
    } else {
      v = std::isfinite(exact.upper) ? std::nextafter(exact.upper, -INFINITY)
                                     : std::nextafter(exact.lower, INFINITY);
    }
  }
  return v;
}

}  // namespace

Instance inverse_transform(const BinaryIR& b, const Anchor& a,
                           const Discretization& d, const CellStats& stats,
                           RngStream& rng) {
  if (b.size() != d.arity() || a.coords.size() != d.arity()) {
    throw ShapeError("binary vector, anchor and discretization widths differ");
  }
  if (stats.bins.size() != d.arity() || stats.features.size() != d.arity()) {
    throw ShapeError("cell statistics were not fitted on this discretization");
  }
  Instance x(d.arity());
  for (std::size_t j = 0; j < d.arity(); ++j) {
    const std::size_t bins = d.bin_count(j);
    std::size_t bin = a.coords[j];
    if (b[j] == 0) {
      if (bins < 2) {
        throw InfeasibleError("feature '" + d.schema()[j].name +
                              "' has a single bin; it cannot be switched off");
      }
      bin = static_cast<std::size_t>(rng.below(bins - 1));
      if (bin >= a.coords[j]) ++bin;
    }
    if (d.schema().is_categorical(j)) {
      x[j] = static_cast<double>(bin);
      continue;
    }
    const BinStats& bs = stats.bins[j].at(bin);
    const Gaussian& g = bs.count >= 2 ? bs.fit : stats.features[j].global;
    x[j] = sample_in_bin(d, j, bin, g, stats.features[j], rng);
  }
  return x;
}

std::vector<BoundSample> sample_and_bind(
    const Anchor& a, const Discretization& d,
    const std::vector<FeatureSummary>& features, const SamplerConfig& config,
    std::size_t n, RngStream& rng) {
  if (n < 1) throw ParameterError("sample_and_bind needs n >= 1");
  if (features.size() != d.arity() || a.instance.size() != d.arity()) {
    throw ShapeError("feature summary, anchor and discretization widths differ");
  }
  std::vector<BoundSample> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Instance x(d.arity());
    for (std::size_t j = 0; j < d.arity(); ++j) {
      if (d.schema().is_categorical(j)) {
        x[j] = a.instance[j];
        if (rng.bernoulli(config.flip)) {
          const auto& freq = features[j].category_freq;
          double u = rng.uniform();
          std::size_t c = 0;
          while (c + 1 < freq.size() && u >= freq[c]) {
            u -= freq[c];
            ++c;
          }
          x[j] = static_cast<double>(c);
        }
      } else {
        x[j] = rng.normal(a.instance[j], config.scale * features[j].global.std);
      }
    }
    DiscreteCoords c = discretize_instance(x, d);
    BinaryIR b = binarize(c, a);
    out.push_back({std::move(x), std::move(c), std::move(b)});
  }
  return out;
}

EncodingCount count_encodings(const TabularDataset& ds, const Discretization& d,
                              const Anchor* anchor) {
  EncodingCount out;
  if (anchor) {
    std::set<BinaryIR> seen;
    for (const auto& row : ds.rows()) {
      seen.insert(binarize(discretize_instance(row, d), *anchor));
    }
    out.used = seen.size();
    out.theoretical = std::ldexp(1.0, static_cast<int>(d.arity()));
  } else {
    std::set<DiscreteCoords> seen;
    for (const auto& row : ds.rows()) seen.insert(discretize_instance(row, d));
    out.used = seen.size();
    out.theoretical = 1.0;
    for (std::size_t j = 0; j < d.arity(); ++j) {
      out.theoretical *= static_cast<double>(d.bin_count(j));
    }
  }
  return out;
}

void write_bound_samples_csv(std::ostream& out, const Discretization& d,
                             const std::vector<BoundSample>& samples) {
  const auto& schema = d.schema();
  const char* groups[] = {"orig_", "disc_", "bin_"};
  bool first = true;
  for (const char* g : groups) {
    for (std::size_t j = 0; j < d.arity(); ++j) {
      out << (first ? "" : ",") << g << schema[j].name;
      first = false;
    }
  }
  out << '\n';
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < d.arity(); ++j) {
      out << (j ? "," : "") << format_double(s.original[j]);
    }
    for (std::size_t j = 0; j < d.arity(); ++j) out << ',' << s.coords[j];
    for (std::size_t j = 0; j < d.arity(); ++j) out << ',' << int(s.binary[j]);
    out << '\n';
  }
}

}  // namespace irkit::tabular
