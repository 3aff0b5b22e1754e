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

#include "irkit/experiments/purity_benchmark.h"

#include <algorithm>
#include <cmath>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"
#include "irkit/core/parallel.h"
#include "irkit/tabular/discretization.h"
#include "irkit/tree/tree.h"

namespace irkit::experiments {
namespace {

double at_width(const std::vector<double>& path, std::size_t width) {
  return path[std::min(width, path.size()) - 1];
}

// Mean and population std, summed in sorted order so the result does not
// depend on instance order.
std::pair<double, double> moments(std::vector<double> v) {
  if (v.empty()) return {std::nan(""), std::nan("")};
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (const double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

std::vector<std::vector<double>> feature_space(const TabularDataset& ds,
                                               bool standardize) {
  std::vector<std::vector<double>> x = ds.rows();
  if (!standardize) return x;
  const auto summary = tabular::summarize_features(ds);
  for (auto& row : x) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = (row[j] - summary[j].global.mean) / summary[j].global.std;
    }
  }
  return x;
}

}  // namespace

std::optional<std::size_t> PurityResult::crossover_width() const {
  std::optional<std::size_t> best;
  for (const auto& p : points) {
    if (p.tree_global < quartile_global && (!best || p.width < *best)) {
      best = p.width;
    }
  }
  return best;
}

nlohmann::json PurityResult::to_json() const {
  nlohmann::json j;
  j["metric"] = metric == tabular::Metric::kGini ? "gini" : "mse";
  j["quartile_global"] = quartile_global;
  j["quartile_local"] = {{"mean", quartile_local_mean}, {"std", quartile_local_std}};
  j["used_encodings"] = encodings.used;
  j["theoretical_encodings"] = encodings.theoretical;
  j["tree_global_leaves"] = tree_global_leaves;
  j["local_instances"] = local_instances;
  j["local_skipped"] = local_skipped;
  j["radius"] = radius;
  const auto w = crossover_width();
  j["crossover_width"] = w ? nlohmann::json(*w) : nlohmann::json(nullptr);
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : points) {
    curve.push_back({{"width", p.width},
                     {"tree_global", p.tree_global},
                     {"tree_local_mean", p.tree_local_mean},
                     {"tree_local_std", p.tree_local_std}});
  }
  j["tree"] = curve;
  return j;
}

PurityResult purity_benchmark(const TabularDataset& ds,
                              const PurityBenchConfig& config) {
  if (ds.size() == 0) throw ParameterError("purity benchmark needs data");
  if (!(config.radius_fraction > 0.0 && config.radius_fraction <= 1.0)) {
    throw ParameterError("radius fraction must be in (0, 1]");
  }
  if (config.widths.empty()) throw ParameterError("no tree widths given");
  for (const auto w : config.widths) {
    if (w < 1) throw ParameterError("tree widths must be >= 1");
  }
  const std::size_t max_width =
      std::max<std::size_t>(2, *std::max_element(config.widths.begin(),
                                                 config.widths.end()));

  PurityResult result;
  result.metric = tabular::default_metric(ds.target().kind());
  const tree::Criterion criterion = tree::default_criterion(ds.target().kind());

  const tabular::Discretization d = tabular::quantile_discretize(ds, config.q);
  std::vector<std::vector<std::uint32_t>> coords(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    coords[i] = tabular::discretize_instance(ds.row(i), d).bins;
  }
  result.quartile_global =
      tabular::weighted_quality(tabular::group_cells(ds, coords), result.metric);
  result.encodings = tabular::count_encodings(ds, d);

  const tree::TreePartition global =
      tree::fit_tree(ds, criterion, max_width, config.min_leaf);
  result.tree_global_leaves = global.leaf_count();
  for (const auto w : config.widths) {
    result.points.push_back({w, at_width(global.impurity_path(), w), std::nan(""),
                             std::nan("")});
  }
  if (!config.local) {
    result.quartile_local_mean = result.quartile_local_std = std::nan("");
    return result;
  }

  const auto x = feature_space(ds, config.standardize);
  const std::size_t n = ds.size();
  std::vector<double> dist(n * n, 0.0);
  double max_dist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t f = 0; f < x[i].size(); ++f) {
        const double diff = x[i][f] - x[j][f];
        s += diff * diff;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
      max_dist = std::max(max_dist, dist[i * n + j]);
    }
  }
  result.radius = config.radius_fraction * max_dist;

  struct Local {
    bool used = false;
    double quartile = 0.0;
    std::vector<double> tree;  // per configured width
  };
  std::vector<Local> local(n);
  parallel_for(n, config.jobs, [&](std::size_t i) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i * n + j] <= result.radius) members.push_back(j);
    }
    if (members.size() < 2) return;
    const TabularDataset sub = ds.subset(members);
    std::vector<std::vector<std::uint32_t>> bits(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
      const auto& c = coords[members[m]];
      bits[m].resize(c.size());
      for (std::size_t f = 0; f < c.size(); ++f) bits[m][f] = c[f] == coords[i][f];
    }
    Local& out = local[i];
    out.quartile =
        tabular::weighted_quality(tabular::group_cells(sub, bits), result.metric);
    const tree::TreePartition t =
        tree::fit_tree(sub, criterion, max_width, config.min_leaf);
    for (const auto w : config.widths) out.tree.push_back(at_width(t.impurity_path(), w));
    out.used = true;
  });

  std::vector<double> quartile;
  std::vector<std::vector<double>> per_width(config.widths.size());
  for (const auto& l : local) {
    if (!l.used) {
      ++result.local_skipped;
      continue;
    }
    ++result.local_instances;
    quartile.push_back(l.quartile);
    for (std::size_t w = 0; w < l.tree.size(); ++w) per_width[w].push_back(l.tree[w]);
  }
  std::tie(result.quartile_local_mean, result.quartile_local_std) = moments(quartile);
  for (std::size_t w = 0; w < config.widths.size(); ++w) {
    std::tie(result.points[w].tree_local_mean, result.points[w].tree_local_std) =
        moments(per_width[w]);
  }
  return result;
}

void write_purity_csv(std::ostream& out, const PurityResult& r) {
  out << "width,quartile_global,quartile_local_mean,quartile_local_std,"
         "tree_global,tree_local_mean,tree_local_std\n";
  for (const auto& p : r.points) {
    out << p.width << ',' << format_double(r.quartile_global) << ','
        << format_double(r.quartile_local_mean) << ','
        << format_double(r.quartile_local_std) << ','
        << format_double(p.tree_global) << ',' << format_double(p.tree_local_mean)
        << ',' << format_double(p.tree_local_std) << '\n';
  }
}

}  // namespace irkit::experiments
