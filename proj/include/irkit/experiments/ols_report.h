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

#ifndef IRKIT_EXPERIMENTS_OLS_REPORT_H_
#define IRKIT_EXPERIMENTS_OLS_REPORT_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "irkit/core/rng.h"

namespace irkit::experiments {

// One-dimensional scenario: bins [i, i + 1) for i = 0..B-1 with fixed
// black-box outputs per bin and the anchor in one of them.
struct OlsScenario {
  std::vector<double> bin_outputs{0.0, 1.0, 1.0};
  std::size_t anchor_bin = 1;
  std::size_t anchor_count = 100;
  // Base sample count of an off bin; each ratio scales it per off bin.
  std::size_t off_base_count = 100;
  // One entry per report row, one weight per off bin (in bin order).
  std::vector<std::vector<double>> ratios{{1, 1}, {2, 1}, {3, 1}, {1, 2}, {1, 3}};
  // Std of Gaussian noise added to outputs; 0 keeps them exact.
  double noise = 0.0;
};

struct OlsReportRow {
  std::string ratio;  // "3:1"
  std::vector<std::size_t> off_counts;
  double coefficient = 0.0;
  double intercept = 0.0;
  double analytic_coefficient = 0.0;
  double analytic_intercept = 0.0;
};

// Builds each sample in the original domain, binarizes it against the anchor
// bin, fits OLS on the single concept and tabulates it next to the weighted
// mean identity. ParameterError for fewer than 3 bins or malformed ratios.
std::vector<OlsReportRow> ols_sensitivity_report(const OlsScenario& scenario,
                                                 RngStream& rng);

void write_ols_report_csv(std::ostream& out,
                          const std::vector<OlsReportRow>& rows);

}  // namespace irkit::experiments

#endif  // IRKIT_EXPERIMENTS_OLS_REPORT_H_
