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

#include "irkit/surrogate/explain.h"

#include <algorithm>
#include <cmath>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"

namespace irkit::surrogate {

IrSpec IrSpec::Parse(std::string_view text) {
  IrSpec spec;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  if (kind == "quantile") {
    spec.kind = Kind::kQuantile;
    spec.param = 4;
  } else if (kind == "tree") {
    spec.kind = Kind::kTree;
    spec.param = 16;
  } else {
    throw ParameterError("unknown IR '" + std::string(text) +
                         "' (expected quantile[:q] or tree[:max_leaves])");
  }
  if (colon != std::string_view::npos) {
    const auto v = parse_double(text.substr(colon + 1));
    if (!v || *v < 2 || *v != std::floor(*v)) {
      throw ParameterError("IR parameter must be an integer >= 2 in '" +
                           std::string(text) + "'");
    }
    spec.param = static_cast<std::size_t>(*v);
  }
  return spec;
}

std::string IrSpec::str() const {
  return (kind == Kind::kQuantile ? "quantile:" : "tree:") + std::to_string(param);
}

std::vector<Concept> LinearExplanation::ranked() const {
  std::vector<Concept> out = concepts;
  std::stable_sort(out.begin(), out.end(), [](const Concept& a, const Concept& b) {
    return std::abs(a.coefficient) > std::abs(b.coefficient);
  });
  return out;
}

nlohmann::json Explanation::to_json() const {
  nlohmann::json j;
  j["ir"] = ir.str();
  j["discretization"] = discretization.to_json();
  j["anchor"] = anchor.instance;
  j["target_class"] = target_class;
  j["target_class_name"] = target_class_name;
  j["anchor_prediction"] = anchor_prediction;
  j["samples"] = samples;
  if (linear) {
    j["surrogate"] = "ols";
    j["intercept"] = linear->intercept;
    nlohmann::json concepts = nlohmann::json::array();
    for (const auto& c : linear->ranked()) {
      concepts.push_back({{"concept", c.name},
                          {"description", c.description},
                          {"coefficient", c.coefficient}});
    }
    j["concepts"] = concepts;
  }
  if (tree) {
    j["surrogate"] = "tree";
    j["tree"] = tree->tree.to_json(discretization.schema());
    j["rules"] = tree->tree.rules(discretization.schema());
    j["training_quality"] = tree->training_quality;
  }
  return j;
}

void Explanation::write_csv(std::ostream& out) const {
  out << "concept,description,coefficient\n";
  if (!linear) return;
  for (const auto& c : linear->ranked()) {
    out << c.name << ',' << c.description << ',' << format_double(c.coefficient)
        << '\n';
  }
}

TreeSurrogate fit_surrogate_tree(const std::vector<Instance>& x,
                                 const FeatureSchema& schema, const Target& y,
                                 std::size_t max_leaves, std::size_t min_leaf) {
  const TabularDataset ds(schema, x, y);
  TreeSurrogate out;
  out.tree = tree::fit_tree(ds, tree::default_criterion(y.kind()), max_leaves,
                            min_leaf);
  out.training_quality = out.tree.training_quality();
  return out;
}

tabular::Discretization build_ir(const IrSpec& ir, BlackBox& bb,
                                 const TabularDataset& ds,
                                 std::size_t tree_min_leaf) {
  if (ir.kind == IrSpec::Kind::kQuantile) {
    return tabular::quantile_discretize(ds, static_cast<int>(ir.param));
  }
  const ProbabilityMatrix p = bb.predict(ds.rows());
  std::vector<int> labels(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) labels[i] = argmax(p[i]);
  std::vector<std::string> names(bb.num_classes());
  for (std::size_t c = 0; c < names.size(); ++c) names[c] = std::to_string(c);
  const TabularDataset labelled =
      ds.with_target(Target::Labels(std::move(labels), std::move(names)));
  const auto t =
      tree::fit_tree(labelled, tree::Criterion::kGini, ir.param, tree_min_leaf);
  return t.to_discretization(ds.schema());
}

Explanation explain_tabular(const Instance& x, BlackBox& bb,
                            const TabularDataset& ds, const IrSpec& ir,
                            const SurrogateConfig& config, RngStream& rng) {
  check_instance(ds.schema(), x);
  const std::size_t arity = ds.arity();
  if (config.kind == SurrogateKind::kOls && config.n < arity + 1) {
    throw ConfigError("OLS surrogate needs n >= arity + 1 = " +
                      std::to_string(arity + 1) + " samples, got " +
                      std::to_string(config.n));
  }
  if (config.n == 0) throw ConfigError("sample count must be positive");

  Explanation e;
  e.ir = ir;
  e.discretization = build_ir(ir, bb, ds, config.ir_min_leaf);
  e.anchor = tabular::Anchor::Make(x, e.discretization);

  const ProbabilityMatrix anchor_p = bb.predict({x});
  const std::size_t classes = bb.num_classes();
  e.target_class = config.target_class.value_or(
      static_cast<std::size_t>(argmax(anchor_p[0])));
  if (e.target_class >= classes) {
    throw ConfigError("target class " + std::to_string(e.target_class) +
                      " out of range for " + std::to_string(classes) +
                      " classes");
  }
  const auto& class_names = ds.target().class_names();
  e.target_class_name = e.target_class < class_names.size()
                            ? class_names[e.target_class]
                            : std::to_string(e.target_class);
  e.anchor_prediction = anchor_p[0][e.target_class];

  RngStream sample_rng = rng.substream("sample");
  const auto samples =
      tabular::sample_and_bind(e.anchor, e.discretization,
                               tabular::summarize_features(ds), config.sampler,
                               config.n, sample_rng);
  e.samples = samples.size();

  std::vector<Instance> originals;
  originals.reserve(samples.size());
  for (const auto& s : samples) originals.push_back(s.original);
  const ProbabilityMatrix p = bb.predict(originals);

  std::vector<double> y(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    y[i] = config.target_mode == TargetMode::kProbability
               ? p[i][e.target_class]
               : (static_cast<std::size_t>(argmax(p[i])) == e.target_class ? 1.0
                                                                           : 0.0);
  }

  if (config.kind == SurrogateKind::kTree) {
    if (config.target_mode == TargetMode::kCrisp) {
      std::vector<int> labels(y.begin(), y.end());
      e.tree = fit_surrogate_tree(originals, ds.schema(),
                                  Target::Labels(std::move(labels), {"other", "target"}),
                                  config.tree_max_leaves);
    } else {
      e.tree = fit_surrogate_tree(originals, ds.schema(), Target::Numeric(y),
                                  config.tree_max_leaves);
    }
    return e;
  }

  // Concepts that never change across the sample are collinear with the
  // intercept; they stay out of the fit and get coefficient 0.
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < arity; ++j) {
    const auto first = samples.front().binary[j];
    for (const auto& s : samples) {
      if (s.binary[j] != first) {
        active.push_back(j);
        break;
      }
    }
  }
  Eigen::MatrixXd design(samples.size(), active.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t a = 0; a < active.size(); ++a) {
      design(i, a) = samples[i].binary[active[a]];
    }
  }
  std::vector<double> weights;
  if (config.kernel_width > 0.0) {
    weights.reserve(samples.size());
    for (const auto& s : samples) {
      const double d = static_cast<double>(arity - s.binary.count_ones()) /
                       static_cast<double>(arity);
      weights.push_back(std::exp(-d * d / (config.kernel_width * config.kernel_width)));
    }
  }
  const LinearFit fit = fit_ols(design, y, weights);

  LinearExplanation lin;
  lin.intercept = fit.intercept;
  for (std::size_t j = 0; j < arity; ++j) {
    lin.concepts.push_back({j, ds.schema()[j].name,
                            e.discretization.describe_bin(j, e.anchor.coords[j]),
                            0.0});
  }
  for (std::size_t a = 0; a < active.size(); ++a) {
    lin.concepts[active[a]].coefficient = fit.coefficients[a];
  }
  e.linear = std::move(lin);
  return e;
}

}  // namespace irkit::surrogate
