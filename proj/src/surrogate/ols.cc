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

#include "irkit/surrogate/ols.h"

#include <string>

#include "irkit/core/error.h"

namespace irkit::surrogate {

LinearFit fit_ols(const Eigen::MatrixXd& x, std::span<const double> y,
                  std::span<const double> weights) {
  const auto n = x.rows();
  if (n == 0) throw ParameterError("OLS needs at least one row");
  if (static_cast<std::size_t>(n) != y.size()) {
    throw ParameterError("OLS design has " + std::to_string(n) + " rows but " +
                         std::to_string(y.size()) + " targets");
  }
  if (!weights.empty() && weights.size() != y.size()) {
    throw ParameterError("OLS weight count differs from row count");
  }
  const auto p = x.cols();
  Eigen::MatrixXd a(n, p + 1);
  a.col(0).setOnes();
  a.rightCols(p) = x;
  const Eigen::Map<const Eigen::VectorXd> target(y.data(), n);

  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
  if (weights.empty()) {
    gram = a.transpose() * a;
    rhs = a.transpose() * target;
  } else {
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
    const Eigen::MatrixXd wa = w.asDiagonal() * a;
    gram = a.transpose() * wa;
    rhs = wa.transpose() * target;
  }
  gram.diagonal().array() += kOlsDamping;
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);

  LinearFit fit;
  fit.intercept = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  return fit;
}

LinearFit fit_ols(const std::vector<BinaryIR>& x, std::span<const double> y,
                  std::span<const double> weights) {
  const std::size_t p = x.empty() ? 0 : x.front().size();
  Eigen::MatrixXd m(x.size(), p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != p) throw ShapeError("ragged binary design");
    for (std::size_t j = 0; j < p; ++j) m(i, j) = x[i][j];
  }
  return fit_ols(m, y, weights);
}

LinearFit analytic_binary_coefficient(std::span<const ConceptGroup> groups) {
  double on_sum = 0.0, off_sum = 0.0;
  std::size_t on_n = 0, off_n = 0;
  for (const auto& g : groups) {
    if (g.on) {
      on_sum += g.mean * static_cast<double>(g.count);
      on_n += g.count;
    } else {
      off_sum += g.mean * static_cast<double>(g.count);
      off_n += g.count;
    }
  }
  if (on_n == 0 || off_n == 0) {
    throw InfeasibleError("both concept groups must be non-empty");
  }
  const double on_mean = on_sum / static_cast<double>(on_n);
  const double off_mean = off_sum / static_cast<double>(off_n);
  return {off_mean, {on_mean - off_mean}};
}

LinearFit analytic_binary_coefficient(const tabular::CellStats& cells) {
  std::vector<ConceptGroup> groups;
  for (const auto& c : cells.cells) {
    if (c.key.size() != 1 || c.key[0] > 1) {
      throw ShapeError("cells must be keyed by a single bit");
    }
    if (c.target_mean.size() != 1) {
      throw DomainError("cells must carry a single numeric target");
    }
    groups.push_back({c.key[0] == 1, c.count(), c.target_mean[0]});
  }
  return analytic_binary_coefficient(groups);
}

}  // namespace irkit::surrogate
