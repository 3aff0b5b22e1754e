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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "irkit/core/datasets.h"
#include "irkit/core/error.h"
#include "irkit/tabular/cell_stats.h"
#include "irkit/tabular/discretization.h"
#include "irkit/tabular/sampling.h"
#include "test_util.h"

namespace irkit::tabular {
namespace {

using testing::labelled;
using testing::numeric;

// Independent quantile oracle: walk the sorted sample and interpolate
// between the two order statistics bracketing position (n - 1) p.
double quantile_oracle(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  std::size_t below = 0;
  while (below + 1 < v.size() && static_cast<double>(below + 1) <= pos) ++below;
  if (below + 1 == v.size()) return v.back();
  const double frac = pos - static_cast<double>(below);
  return v[below] * (1.0 - frac) + v[below + 1] * frac;
}

Discretization one_feature(std::vector<double> edges,
                           BinClosure closure = BinClosure::kLeftClosed) {
  return Discretization(FeatureSchema::Numerical({"x"}), {std::move(edges)}, closure);
}

// ---- quantile_discretize ---------------------------------------------------

TEST(QuantileEdges, OneToEightQuartiles) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  const auto e = quantile_edges(v, 4);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_DOUBLE_EQ(e[0], 2.75);
  EXPECT_DOUBLE_EQ(e[1], 4.5);
  EXPECT_DOUBLE_EQ(e[2], 6.25);
}

TEST(QuantileEdges, ConstantFeatureHasNoEdges) {
  const auto ds = numeric({{5}, {5}, {5}, {5}}, {0, 1, 2, 3});
  const auto d = quantile_discretize(ds, 4);
  EXPECT_TRUE(d.edges(0).empty());
  EXPECT_EQ(d.bin_count(0), 1u);
}

TEST(QuantileEdges, QBelowTwoRejected) {
  const auto ds = numeric({{1}, {2}}, {0, 1});
  EXPECT_THROW(quantile_discretize(ds, 1), ParameterError);
}

TEST(QuantileEdges, MatchOracleOnRandomSamples) {
  RngStream r(12);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(2 + r.below(40));
    for (auto& x : v) x = std::round(r.normal(0, 5));  // ties on purpose
    for (const int q : {2, 3, 4, 5, 10}) {
      std::vector<double> expect;
      for (int i = 1; i < q; ++i) {
        const double e = quantile_oracle(v, static_cast<double>(i) / q);
        if (expect.empty() || e > expect.back()) expect.push_back(e);
      }
      const auto got = quantile_edges(v, q);
      ASSERT_EQ(got.size(), expect.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
    }
  }
}

TEST(QuantileEdges, DiabetesEdgesMatchOracle) {
  const auto ds = load_builtin_dataset("diabetes", testing::dataset_dir());
  const auto d = quantile_discretize(ds, 4);
  for (std::size_t j = 0; j < ds.arity(); ++j) {
    const auto col = ds.column(j);
    std::vector<double> expect;
    for (const double p : {0.25, 0.5, 0.75}) {
      const double e = quantile_oracle(col, p);
      if (expect.empty() || e > expect.back()) expect.push_back(e);
    }
    ASSERT_EQ(d.edges(j).size(), expect.size()) << ds.schema()[j].name;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      EXPECT_NEAR(d.edges(j)[i], expect[i], 1e-12);
    }
  }
  // Nine features keep three edges; the binary `sex` column collapses to two.
  EXPECT_EQ(d.edges(*ds.schema().index_of("sex")).size(), 2u);
}

// ---- discretize_instance / binarize -----------------------------------------

TEST(Discretize, LeftClosedBoundaries) {
  const auto d = one_feature({5, 7});
  EXPECT_EQ(d.bin_of(0, 6.5), 1u);
  EXPECT_EQ(d.bin_of(0, 5.0), 1u);
  EXPECT_EQ(d.bin_of(0, 4.999), 0u);
  EXPECT_EQ(d.bin_of(0, 7.0), 2u);
  EXPECT_EQ(d.bin_of(0, 1e300), 2u);
}

TEST(Discretize, RightClosedBoundaries) {
  const auto d = one_feature({5, 7}, BinClosure::kRightClosed);
  EXPECT_EQ(d.bin_of(0, 5.0), 0u);
  EXPECT_EQ(d.bin_of(0, 5.0001), 1u);
  EXPECT_EQ(d.bin_of(0, 7.0), 1u);
}

TEST(Discretize, EdgesMustIncrease) {
  EXPECT_THROW(one_feature({5, 5}), ParameterError);
  EXPECT_THROW(one_feature({7, 5}), ParameterError);
  EXPECT_THROW(one_feature({NAN}), ParameterError);
}

TEST(Discretize, CategoricalUsesCategoryIndex) {
  const FeatureSchema schema({{"c", FeatureKind::kCategorical, {"r", "g", "b"}}});
  const Discretization d(schema, {{}});
  EXPECT_EQ(d.bin_count(0), 3u);
  const Instance x{2};
  EXPECT_EQ(discretize_instance(x, d)[0], 2u);
  const Instance bad{3};
  EXPECT_THROW(discretize_instance(bad, d), DomainError);
  EXPECT_EQ(d.describe_bin(0, 1), "c = g");
}

TEST(Discretize, DescribeBinStrings) {
  const Discretization right(FeatureSchema::Numerical({"x1", "x2"}),
                             {{25, 50, 75}, {40, 80}}, BinClosure::kRightClosed);
  EXPECT_EQ(right.describe_bin(1, 1), "40 < x2 <= 80");
  EXPECT_EQ(right.describe_bin(0, 3), "75 < x1");
  const Discretization left(FeatureSchema::Numerical({"x1", "x2"}),
                            {{25, 50, 75}, {40, 80}});
  EXPECT_EQ(left.describe_bin(0, 3), "75 <= x1");
  EXPECT_EQ(left.describe_bin(1, 0), "x2 < 40");
  EXPECT_EQ(left.describe_bin(1, 1), "40 <= x2 < 80");
}

TEST(Discretize, JsonRoundTrip) {
  const FeatureSchema schema({{"a", FeatureKind::kNumerical, {}},
                              {"c", FeatureKind::kCategorical, {"u", "v"}}});
  const Discretization d(schema, {{1.5, 2.25}, {}}, BinClosure::kRightClosed);
  const auto back = Discretization::from_json(d.to_json(), schema);
  EXPECT_EQ(back.closure(), BinClosure::kRightClosed);
  EXPECT_EQ(back.edges(0), d.edges(0));
  EXPECT_EQ(back.bin_count(1), 2u);
}

TEST(Binarize, AnchorEncodesAsAllOnes) {
  const auto d = one_feature({5, 7});
  const auto a = Anchor::Make({6.5}, d);
  EXPECT_EQ(binarize(a.coords, a), BinaryIR::Ones(1));
  const Instance below{4.0};
  EXPECT_EQ(binarize(discretize_instance(below, d), a), BinaryIR::Zeros(1));
}

TEST(Binarize, GridExample) {
  const Discretization d(FeatureSchema::Numerical({"a", "b"}), {{1, 2, 3}, {1, 2, 3}});
  const auto a = Anchor::Make({1.5, 1.5}, d);
  EXPECT_EQ(binarize({{3, 1}}, a), (BinaryIR{{0, 1}}));
}

TEST(Binarize, ArityMismatchIsShapeError) {
  const auto d = one_feature({5});
  const auto a = Anchor::Make({6}, d);
  EXPECT_THROW(binarize({{0, 0}}, a), ShapeError);
}

// Distinct coordinates share a binary code exactly when some feature has at
// least three bins.
TEST(Binarize, ManyToOneIffThreeOrMoreBins) {
  for (const std::size_t bins : {1u, 2u, 3u, 4u}) {
    std::vector<double> edges;
    for (std::size_t e = 1; e < bins; ++e) edges.push_back(static_cast<double>(e));
    const Discretization d(FeatureSchema::Numerical({"a", "b"}), {edges, {1}});
    const auto a = Anchor::Make({0.5, 0.5}, d);
    std::map<BinaryIR, int> seen;
    bool collision = false;
    for (std::uint32_t i = 0; i < bins; ++i) {
      for (std::uint32_t j = 0; j < 2; ++j) {
        collision |= ++seen[binarize({{i, j}}, a)] > 1;
      }
    }
    EXPECT_EQ(collision, bins >= 3) << bins << " bins";
  }
}

// ---- cell statistics and purity metrics ---------------------------------------

TEST(CellStats, CountsAndProportions) {
  const auto ds = labelled({{0}, {0.5}, {2}, {2.5}}, {0, 0, 1, 1});
  const auto stats = fit_cell_stats(ds, one_feature({1}));
  ASSERT_EQ(stats.cells.size(), 2u);
  EXPECT_EQ(stats.cells[0].count(), 2u);
  EXPECT_EQ(stats.cells[1].count(), 2u);
  EXPECT_EQ(stats.total(), 4u);
}

TEST(CellStats, HistogramProportions) {
  const auto ds = labelled({{0}, {0}, {0}, {0}}, {0, 0, 1, 1});
  const auto stats = fit_cell_stats(ds, one_feature({}));
  EXPECT_DOUBLE_EQ(stats.cells[0].proportion(0), 0.5);
  EXPECT_DOUBLE_EQ(stats.cells[0].proportion(1), 0.5);
}

TEST(CellStats, PopulationGaussian) {
  const auto ds = labelled({{4.0}, {6.0}}, {0, 1});
  const auto stats = fit_cell_stats(ds, one_feature({}));
  EXPECT_DOUBLE_EQ(stats.cells[0].feature_fit[0].mean, 5.0);
  EXPECT_DOUBLE_EQ(stats.cells[0].feature_fit[0].std, 1.0);
}

TEST(CellStats, DegenerateStdFloored) {
  const auto g = fit_gaussian(std::vector<double>{3, 3, 3});
  EXPECT_EQ(g.std, kMinStd);
}

CellEntry labels_cell(std::vector<int> labels, std::size_t classes = 2) {
  std::vector<Instance> rows(labels.size(), Instance{0});
  const auto ds = labelled(rows, labels, classes);
  return group_cells(ds, std::vector<std::vector<std::uint32_t>>(labels.size(), {0}))
      .cells.front();
}

CellEntry numeric_cell(std::vector<double> y) {
  std::vector<Instance> rows(y.size(), Instance{0});
  const auto ds = numeric(rows, y);
  return group_cells(ds, std::vector<std::vector<std::uint32_t>>(y.size(), {0}))
      .cells.front();
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini_impurity(labels_cell({1, 1, 1})), 0.0);
  EXPECT_DOUBLE_EQ(gini_impurity(labels_cell({0, 0, 1, 1})), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(labels_cell({0, 0, 0, 1})), 0.375);
}

TEST(Gini, EmptyCellRejected) {
  CellEntry empty;
  empty.label_counts = {0, 0};
  EXPECT_THROW(gini_impurity(empty), InfeasibleError);
}

TEST(Mse, Examples) {
  EXPECT_DOUBLE_EQ(mse_uniformity(numeric_cell({3, 3, 3})), 0.0);
  EXPECT_DOUBLE_EQ(mse_uniformity(numeric_cell({0, 1})), 0.25);
  EXPECT_NEAR(mse_uniformity(numeric_cell({1, 2, 3})), 2.0 / 3.0, 1e-15);
}

TEST(Mse, ProbabilityTargetsSumPerClass) {
  const TabularDataset ds(FeatureSchema::Numerical({"x"}), {{0}, {0}},
                          Target::Probabilities({{1, 0}, {0, 1}}, {"a", "b"}));
  const auto c = group_cells(ds, {{0}, {0}}).cells.front();
  EXPECT_DOUBLE_EQ(mse_uniformity(c), 0.5);
}

TEST(WeightedQuality, Examples) {
  std::vector<CellEntry> cells{labels_cell({1}), labels_cell({0, 0, 1, 1})};
  // Sizes (1, 4) with scores (0, 0.5).
  EXPECT_DOUBLE_EQ(weighted_quality(cells, Metric::kGini), 2.0 / 5.0);
  // Sizes (1, 3) with scores (0, 0.5).
  const double spread = std::sqrt(0.75);
  std::vector<CellEntry> sized{numeric_cell({7}), numeric_cell({-spread, 0, spread})};
  EXPECT_NEAR(weighted_quality(sized, Metric::kMse), 0.375, 1e-15);
  EXPECT_DOUBLE_EQ(weighted_quality(std::vector<CellEntry>{labels_cell({0, 1})},
                                    Metric::kGini),
                   0.5);
  EXPECT_DOUBLE_EQ(
      weighted_quality(std::vector<CellEntry>{labels_cell({0}), labels_cell({1, 1})},
                       Metric::kGini),
      0.0);
}

TEST(WeightedQuality, NoMembersRejected) {
  EXPECT_THROW(weighted_quality(std::vector<CellEntry>{}, Metric::kGini),
               InfeasibleError);
}

// Brute-force oracles: Gini as the probability that two draws (with
// replacement) disagree, and variance as half the mean squared pairwise
// difference. Both enumerate all member pairs directly.
double gini_pairs(const std::vector<int>& y) {
  double differ = 0.0;
  for (const int a : y) {
    for (const int b : y) differ += a != b;
  }
  return differ / static_cast<double>(y.size() * y.size());
}

double mse_pairs(const std::vector<double>& y) {
  double s = 0.0;
  for (const double a : y) {
    for (const double b : y) s += (a - b) * (a - b);
  }
  return s / (2.0 * static_cast<double>(y.size() * y.size()));
}

TEST(WeightedQuality, MatchesBruteForceOnRandomDatasets) {
  RngStream r(77);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + r.below(30);
    const std::size_t classes = 2 + r.below(3);
    std::vector<Instance> rows;
    std::vector<int> labels;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({r.uniform(0, 3), r.uniform(0, 3)});
      labels.push_back(static_cast<int>(r.below(classes)));
      y.push_back(r.normal(0, 2));
    }
    const Discretization d(FeatureSchema::Numerical({"x0", "x1"}), {{1, 2}, {1.5}});

    std::map<DiscreteCoords, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[discretize_instance(rows[i], d)].push_back(i);
    double gini_sum = 0.0, mse_sum = 0.0;
    for (const auto& [key, members] : groups) {
      std::vector<int> gl;
      std::vector<double> gy;
      for (const auto i : members) {
        gl.push_back(labels[i]);
        gy.push_back(y[i]);
      }
      gini_sum += members.size() * gini_pairs(gl);
      mse_sum += members.size() * mse_pairs(gy);
    }

    const auto lds = labelled(rows, labels, classes);
    const auto nds = numeric(rows, y);
    EXPECT_NEAR(weighted_quality(fit_cell_stats(lds, d), Metric::kGini),
                gini_sum / n, 1e-12);
    EXPECT_NEAR(weighted_quality(fit_cell_stats(nds, d), Metric::kMse), mse_sum / n,
                1e-12);
  }
}

TEST(WeightedQuality, InvariantUnderCellPermutation) {
  RngStream r(5);
  std::vector<CellEntry> cells;
  for (int c = 0; c < 8; ++c) {
    std::vector<int> labels(1 + r.below(6));
    for (auto& l : labels) l = static_cast<int>(r.below(3));
    cells.push_back(labels_cell(labels, 3));
  }
  const double base = weighted_quality(cells, Metric::kGini);
  for (int t = 0; t < 20; ++t) {
    r.shuffle(cells);
    EXPECT_NEAR(weighted_quality(cells, Metric::kGini), base, 1e-15);
  }
}

// ---- inverse_transform --------------------------------------------------------

struct Fixture3Bins {
  Discretization d = one_feature({5, 7});
  TabularDataset ds = numeric({{4}, {4.5}, {5.5}, {6}, {6.5}, {8}, {9}}, {0, 0, 0, 0, 0, 0, 0});
  CellStats stats = fit_cell_stats(ds, d);
  Anchor a = Anchor::Make({6.0}, d);
};

TEST(InverseTransform, AllOnesStaysInAnchorCell) {
  Fixture3Bins f;
  RngStream r(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = inverse_transform(BinaryIR::Ones(1), f.a, f.d, f.stats, r);
    EXPECT_EQ(discretize_instance(x, f.d), f.a.coords);
  }
}

TEST(InverseTransform, OffBinChosenUniformly) {
  Fixture3Bins f;
  RngStream r(2);
  int low = 0, high = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto x = inverse_transform(BinaryIR::Zeros(1), f.a, f.d, f.stats, r);
    const auto bin = f.d.bin_of(0, x[0]);
    ASSERT_NE(bin, 1u);
    (bin == 0 ? low : high) += 1;
  }
  EXPECT_NEAR(static_cast<double>(low) / n, 0.5, 0.05);
  EXPECT_NEAR(static_cast<double>(high) / n, 0.5, 0.05);
}

TEST(InverseTransform, WideGaussianTruncatedToBin) {
  const auto d = one_feature({5, 7});
  CellStats stats;
  stats.features.resize(1);
  stats.features[0].global = {6.0, 10.0};
  stats.features[0].min = -30;
  stats.features[0].max = 30;
  stats.bins = {{{0, {}}, {5, {6.0, 10.0}}, {0, {}}}};
  const auto target = Anchor::Make({6.0}, d);
  RngStream r(3);
  for (int i = 0; i < 2000; ++i) {
    const auto x = inverse_transform(BinaryIR::Ones(1), target, d, stats, r);
    ASSERT_GE(x[0], 5.0);
    ASSERT_LT(x[0], 7.0);
  }
}

TEST(InverseTransform, SingleBinFeatureCannotBeSwitchedOff) {
  const auto d = one_feature({});
  const auto ds = numeric({{1}, {2}}, {0, 0});
  const auto stats = fit_cell_stats(ds, d);
  const auto a = Anchor::Make({1}, d);
  RngStream r(4);
  EXPECT_THROW(inverse_transform(BinaryIR::Zeros(1), a, d, stats, r), InfeasibleError);
}

// binarize(discretize(inverse(b))) == b on random schemas and vectors.
TEST(InverseTransform, RoundTripProperty) {
  RngStream r(2024);
  int checked = 0;
  for (int schema_case = 0; schema_case < 10; ++schema_case) {
    const std::size_t arity = 1 + r.below(5);
    std::vector<FeatureSpec> specs;
    for (std::size_t j = 0; j < arity; ++j) {
      if (r.bernoulli(0.3)) {
        specs.push_back({"c" + std::to_string(j), FeatureKind::kCategorical, {"p", "q", "r"}});
      } else {
        specs.push_back({"n" + std::to_string(j), FeatureKind::kNumerical, {}});
      }
    }
    const FeatureSchema schema(specs);
    std::vector<Instance> rows;
    for (int i = 0; i < 60; ++i) {
      Instance x(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        x[j] = schema.is_categorical(j) ? static_cast<double>(r.below(3))
                                        : r.normal(0, 1 + j);
      }
      rows.push_back(x);
    }
    const TabularDataset ds(schema, rows, Target::Numeric(std::vector<double>(60, 0.0)));
    const auto closure = schema_case % 2 ? BinClosure::kLeftClosed : BinClosure::kRightClosed;
    const auto d = quantile_discretize(ds, 2 + static_cast<int>(r.below(4)), closure);
    const auto stats = fit_cell_stats(ds, d);
    for (int c = 0; c < 100; ++c) {
      const auto a = Anchor::Make(rows[r.below(rows.size())], d);
      BinaryIR b = BinaryIR::Ones(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        if (d.bin_count(j) > 1 && r.bernoulli(0.5)) b.bits[j] = 0;
      }
      const auto x = inverse_transform(b, a, d, stats, r);
      ASSERT_EQ(binarize(discretize_instance(x, d), a), b);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1000);
}

// ---- sample_and_bind -------------------------------------------------------------

TEST(SampleAndBind, TinyScaleCollapsesOntoAnchorCell) {
  const auto ds = load_builtin_dataset("wine", testing::dataset_dir());
  const auto d = quantile_discretize(ds, 4);
  // Type-7 quartiles can land exactly on a training value; pick a row that
  // sits strictly inside its bins so a 1e-9 nudge cannot cross an edge.
  std::size_t row = 0;
  auto on_edge = [&](std::size_t i) {
    for (std::size_t j = 0; j < ds.arity(); ++j) {
      for (const double e : d.edges(j)) {
        if (std::abs(ds.row(i)[j] - e) < 1e-6) return true;
      }
    }
    return false;
  };
  while (on_edge(row)) ++row;
  const auto a = Anchor::Make(ds.row(row), d);
  RngStream r(5);
  const auto s = sample_and_bind(a, d, summarize_features(ds), {1e-9, 1.0}, 200, r);
  for (const auto& b : s) EXPECT_EQ(b.binary, BinaryIR::Ones(ds.arity()));
}

TEST(SampleAndBind, ViewsConsistentProperty) {
  RngStream r(6);
  const FeatureSchema schema({{"a", FeatureKind::kNumerical, {}},
                              {"c", FeatureKind::kCategorical, {"x", "y", "z"}},
                              {"b", FeatureKind::kNumerical, {}}});
  std::vector<Instance> rows;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({r.normal(0, 1), static_cast<double>(r.below(3)), r.uniform(0, 10)});
  }
  const TabularDataset ds(schema, rows, Target::Numeric(std::vector<double>(50, 1.0)));
  const auto d = quantile_discretize(ds, 4);
  const auto a = Anchor::Make(rows[3], d);
  const auto s = sample_and_bind(a, d, summarize_features(ds), {1.0, 0.5}, 1000, r);
  ASSERT_EQ(s.size(), 1000u);
  for (const auto& b : s) {
    ASSERT_EQ(discretize_instance(b.original, d), b.coords);
    ASSERT_EQ(binarize(b.coords, a), b.binary);
  }
}

// Fraction of draws that stay in the anchor's cell, against a Monte Carlo
// oracle using an unrelated generator with the same Gaussian.
TEST(SampleAndBind, AnchorCellFractionMatchesMonteCarlo) {
  RngStream r(7);
  std::vector<Instance> rows;
  for (int i = 0; i < 400; ++i) rows.push_back({r.normal(0, 1), r.normal(3, 2)});
  const auto ds = numeric(rows, std::vector<double>(400, 0.0));
  const auto d = quantile_discretize(ds, 4);
  const auto a = Anchor::Make({0.1, 2.5}, d);
  const auto features = summarize_features(ds);
  const std::size_t n = 10000;
  const auto s = sample_and_bind(a, d, features, {1.0, 1.0}, n, r);
  double ones = 0;
  for (const auto& b : s) ones += b.binary.count_ones() == 2;

  std::mt19937_64 gen(99);
  std::normal_distribution<double> z(0.0, 1.0);
  double oracle = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool in = true;
    for (std::size_t j = 0; j < 2; ++j) {
      const double v = a.instance[j] + features[j].global.std * z(gen);
      in &= d.bin_of(j, v) == a.coords[j];
    }
    oracle += in;
  }
  EXPECT_NEAR(ones / n, oracle / n, 0.05);
}

TEST(SampleAndBind, CsvHasThreeColumnGroups) {
  const auto d = one_feature({1});
  const auto a = Anchor::Make({0.5}, d);
  const auto ds = numeric({{0}, {2}}, {0, 0});
  RngStream r(1);
  const auto s = sample_and_bind(a, d, summarize_features(ds), {}, 2, r);
  std::ostringstream out;
  write_bound_samples_csv(out, d, s);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "orig_x,disc_x,bin_x");
}

// ---- count_encodings -----------------------------------------------------------------

TEST(CountEncodings, SingleRow) {
  const auto ds = numeric({{1, 2}}, {0});
  const auto d = quantile_discretize(ds, 4);
  EXPECT_EQ(count_encodings(ds, d).used, 1u);
}

TEST(CountEncodings, TheoreticalIsProductOfBinCounts) {
  const auto ds = numeric({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}, {0, 0, 0, 0, 0});
  const Discretization d(ds.schema(), {{1, 2}, {3}});
  EXPECT_DOUBLE_EQ(count_encodings(ds, d).theoretical, 6.0);
  const auto a = Anchor::Make(ds.row(0), d);
  EXPECT_DOUBLE_EQ(count_encodings(ds, d, &a).theoretical, 4.0);
}

TEST(CountEncodings, DiabetesQuartiles) {
  const auto ds = load_builtin_dataset("diabetes", testing::dataset_dir());
  const auto e = count_encodings(ds, quantile_discretize(ds, 4));
  EXPECT_NEAR(static_cast<double>(e.used), 428.0, 5.0);
  EXPECT_DOUBLE_EQ(e.theoretical, 3.0 * std::pow(4.0, 9));
}

TEST(CountEncodings, HousingQuartiles) {
  const auto ds = load_builtin_dataset("housing", testing::dataset_dir());
  const auto e = count_encodings(ds, quantile_discretize(ds, 4));
  EXPECT_NEAR(static_cast<double>(e.used), 441.0, 5.0);
}

}  // namespace
}  // namespace irkit::tabular
