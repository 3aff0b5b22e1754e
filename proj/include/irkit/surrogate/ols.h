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

#ifndef IRKIT_SURROGATE_OLS_H_
#define IRKIT_SURROGATE_OLS_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "irkit/core/binary_ir.h"
#include "irkit/tabular/cell_stats.h"

namespace irkit::surrogate {

// Diagonal damping added to the normal equations.
inline constexpr double kOlsDamping = 1e-10;

struct LinearFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
};

// Weighted least squares with an implicit intercept column, solved through
// the damped normal equations (X'WX + 1e-10 I) b = X'Wy. `weights` may be
// empty (all ones). ParameterError for zero rows or mismatched lengths.
LinearFit fit_ols(const Eigen::MatrixXd& x, std::span<const double> y,
                  std::span<const double> weights = {});
LinearFit fit_ols(const std::vector<BinaryIR>& x, std::span<const double> y,
                  std::span<const double> weights = {});

// One group of samples sharing a value of a single binary concept.
struct ConceptGroup {
  bool on = false;
  std::size_t count = 0;
  double mean = 0.0;
};

// Closed form of a single-concept OLS fit: the intercept is the
// count-weighted mean over every off group and the coefficient is the on
// mean minus that. InfeasibleError when either side has no samples.
LinearFit analytic_binary_coefficient(std::span<const ConceptGroup> groups);

// Same, reading groups from cells keyed by a single bit with a numeric target.
LinearFit analytic_binary_coefficient(const tabular::CellStats& cells);

}  // namespace irkit::surrogate

#endif  // IRKIT_SURROGATE_OLS_H_
