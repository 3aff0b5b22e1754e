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

#include "irkit/experiments/ols_report.h"

#include <cmath>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"
#include "irkit/surrogate/ols.h"
#include "irkit/tabular/discretization.h"

namespace irkit::experiments {
namespace {

std::string ratio_label(const std::vector<double>& ratio) {
  std::string s;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (i) s += ':';
    s += format_double(ratio[i]);
  }
  return s;
}

}  // namespace

std::vector<OlsReportRow> ols_sensitivity_report(const OlsScenario& sc,
                                                 RngStream& rng) {
  const std::size_t bins = sc.bin_outputs.size();
  if (bins < 3) throw ParameterError("OLS scenario needs at least 3 bins");
  if (sc.anchor_bin >= bins) throw ParameterError("anchor bin out of range");
  if (sc.anchor_count == 0) throw ParameterError("anchor bin needs samples");

  std::vector<double> edges;
  for (std::size_t b = 1; b < bins; ++b) edges.push_back(static_cast<double>(b));
  const tabular::Discretization d(FeatureSchema::Numerical({"x"}), {edges});
  const tabular::Anchor anchor = tabular::Anchor::Make(
      {static_cast<double>(sc.anchor_bin) + 0.5}, d);

  std::vector<OlsReportRow> rows;
  for (std::size_t r = 0; r < sc.ratios.size(); ++r) {
    const auto& ratio = sc.ratios[r];
    if (ratio.size() != bins - 1) {
      throw ParameterError("ratio '" + ratio_label(ratio) + "' needs " +
                           std::to_string(bins - 1) + " entries");
    }
    OlsReportRow row;
    row.ratio = ratio_label(ratio);
    RngStream row_rng = rng.substream(static_cast<std::uint64_t>(r));

    std::vector<std::size_t> counts(bins);
    std::size_t off = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      if (b == sc.anchor_bin) {
        counts[b] = sc.anchor_count;
        continue;
      }
      const double w = ratio[off++];
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw ParameterError("ratios must be finite and non-negative");
      }
      counts[b] = static_cast<std::size_t>(
          std::llround(w * static_cast<double>(sc.off_base_count)));
      row.off_counts.push_back(counts[b]);
    }

    std::vector<BinaryIR> design;
    std::vector<double> y;
    std::vector<surrogate::ConceptGroup> groups;
    for (std::size_t b = 0; b < bins; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < counts[b]; ++i) {
        const double x = static_cast<double>(b) + row_rng.uniform();
        design.push_back(tabular::binarize(tabular::discretize_instance({&x, 1}, d),
                                           anchor));
        double out = sc.bin_outputs[b];
        if (sc.noise > 0.0) out += row_rng.normal(0.0, sc.noise);
        y.push_back(out);
        sum += out;
      }
      if (counts[b] > 0) {
        groups.push_back({b == sc.anchor_bin, counts[b],
                          sum / static_cast<double>(counts[b])});
      }
    }
    const auto numeric = surrogate::fit_ols(design, y);
    const auto analytic = surrogate::analytic_binary_coefficient(groups);
    row.coefficient = numeric.coefficients[0];
    row.intercept = numeric.intercept;
    row.analytic_coefficient = analytic.coefficients[0];
    row.analytic_intercept = analytic.intercept;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ols_report_csv(std::ostream& out, const std::vector<OlsReportRow>& rows) {
  out << "ratio,off_counts,coefficient,analytic_coefficient,intercept,"
         "analytic_intercept\n";
  for (const auto& r : rows) {
    out << r.ratio << ',';
    for (std::size_t i = 0; i < r.off_counts.size(); ++i) {
      if (i) out << ':';
      out << r.off_counts[i];
    }
    out << ',' << format_double(r.coefficient) << ','
        << format_double(r.analytic_coefficient) << ','
        << format_double(r.intercept) << ',' << format_double(r.analytic_intercept)
        << '\n';
  }
}

}  // namespace irkit::experiments
