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

#include "irkit/core/blackbox.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "irkit/core/error.h"

namespace irkit {
namespace {

std::vector<double> two_class(bool positive, double confidence) {
  return positive ? std::vector<double>{1.0 - confidence, confidence}
                  : std::vector<double>{confidence, 1.0 - confidence};
}

void check_arity(const std::vector<Instance>& batch, std::size_t arity) {
  if (arity == 0) return;
  for (const auto& x : batch) {
    if (x.size() != arity) {
      throw ShapeError("instance width " + std::to_string(x.size()) +
                       " does not match black-box arity " +
                       std::to_string(arity));
    }
  }
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void check_probabilities(const ProbabilityMatrix& p, std::size_t rows,
                         std::size_t classes) {
  if (p.size() != rows) {
    throw ProtocolError("black box returned " + std::to_string(p.size()) +
                        " rows for a batch of " + std::to_string(rows));
  }
  for (const auto& row : p) {
    if (row.size() != classes) {
      throw ProtocolError("black box returned a row of width " +
                          std::to_string(row.size()) + ", expected " +
                          std::to_string(classes));
    }
    double sum = 0.0;
    for (const double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ProtocolError("black box returned a probability outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ProtocolError("black box returned a row summing to " +
                          fmt_num(sum));
    }
  }
}

ProbabilityMatrix BlackBox::predict(const std::vector<Instance>& batch) {
  if (mode() != InputMode::kTabular) {
    throw ShapeError(describe() + " does not accept tabular input");
  }
  check_arity(batch, arity());
  auto out = do_predict(batch);
  check_probabilities(out, batch.size(), num_classes());
  return out;
}

ProbabilityMatrix BlackBox::predict_images(
    const std::vector<image::Image>& batch) {
  if (mode() != InputMode::kImage) {
    throw ShapeError(describe() + " does not accept image input");
  }
  auto out = do_predict_images(batch);
  check_probabilities(out, batch.size(), num_classes());
  return out;
}

ProbabilityMatrix BlackBox::do_predict(const std::vector<Instance>&) {
  throw ShapeError(describe() + " does not accept tabular input");
}

ProbabilityMatrix BlackBox::do_predict_images(const std::vector<image::Image>&) {
  throw ShapeError(describe() + " does not accept image input");
}

// --- halfplane -------------------------------------------------------------

HalfplaneModel::HalfplaneModel(std::size_t arity, std::size_t feature,
                               double threshold, double confidence)
    : arity_(arity), feature_(feature), threshold_(threshold),
      confidence_(confidence) {
  if (feature >= arity) throw ParameterError("halfplane feature out of range");
}

std::string HalfplaneModel::describe() const {
  return "halfplane:" + std::to_string(feature_) + ":" + fmt_num(threshold_);
}

ProbabilityMatrix HalfplaneModel::do_predict(const std::vector<Instance>& batch) {
  ProbabilityMatrix out;
  out.reserve(batch.size());
  for (const auto& x : batch) {
    out.push_back(two_class(x[feature_] >= threshold_, confidence_));
  }
  return out;
}

// --- checkerboard ----------------------------------------------------------

CheckerboardModel::CheckerboardModel(int k, std::size_t arity, double confidence)
    : k_(k), arity_(arity), confidence_(confidence) {
  if (k < 1) throw ParameterError("checkerboard k must be >= 1");
  if (arity < 2) throw ParameterError("checkerboard needs at least 2 features");
}

std::string CheckerboardModel::describe() const {
  return "checkerboard:" + std::to_string(k_);
}

ProbabilityMatrix CheckerboardModel::do_predict(
    const std::vector<Instance>& batch) {
  ProbabilityMatrix out;
  out.reserve(batch.size());
  for (const auto& x : batch) {
    const auto cx = static_cast<long long>(std::floor(k_ * x[0]));
    const auto cy = static_cast<long long>(std::floor(k_ * x[1]));
    const long long parity = ((cx + cy) % 2 + 2) % 2;
    out.push_back(two_class(parity == 1, confidence_));
  }
  return out;
}

// --- band ------------------------------------------------------------------

BandModel::BandModel(std::size_t arity, std::size_t feature, double lower,
                     double upper, double confidence)
    : arity_(arity), feature_(feature), lower_(lower), upper_(upper),
      confidence_(confidence) {
  if (feature >= arity) throw ParameterError("band feature out of range");
  if (!(lower < upper)) throw ParameterError("band requires lower < upper");
}

std::string BandModel::describe() const {
  return "band:" + std::to_string(feature_) + ":" + fmt_num(lower_) + ":" +
         fmt_num(upper_);
}

ProbabilityMatrix BandModel::do_predict(const std::vector<Instance>& batch) {
  ProbabilityMatrix out;
  out.reserve(batch.size());
  for (const auto& x : batch) {
    const double v = x[feature_];
    out.push_back(two_class(lower_ <= v && v < upper_, confidence_));
  }
  return out;
}

// --- constant --------------------------------------------------------------

ConstantModel::ConstantModel(std::size_t arity, std::vector<double> probabilities,
                             InputMode mode)
    : arity_(arity), probabilities_(std::move(probabilities)), mode_(mode) {
  check_probabilities({probabilities_}, 1, probabilities_.size());
}

std::string ConstantModel::describe() const {
  std::string s = "constant:";
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    if (i) s += ",";
    s += fmt_num(probabilities_[i]);
  }
  return s;
}

ProbabilityMatrix ConstantModel::do_predict(const std::vector<Instance>& batch) {
  return ProbabilityMatrix(batch.size(), probabilities_);
}

ProbabilityMatrix ConstantModel::do_predict_images(
    const std::vector<image::Image>& batch) {
  return ProbabilityMatrix(batch.size(), probabilities_);
}

// --- colour-mass -----------------------------------------------------------

double ColourMassModel::red_mass(const image::Image& img) {
  std::uint64_t total = 0;
  for (const auto& p : img.pixels()) total += p.r;
  return static_cast<double>(total) /
         (255.0 * static_cast<double>(img.pixel_count()));
}

ProbabilityMatrix ColourMassModel::do_predict_images(
    const std::vector<image::Image>& batch) {
  ProbabilityMatrix out;
  out.reserve(batch.size());
  for (const auto& img : batch) {
    const double p1 = red_mass(img);
    out.push_back({1.0 - p1, p1});
  }
  return out;
}

// --- knn -------------------------------------------------------------------

KnnModel::KnnModel(const TabularDataset& train, std::size_t k)
    : points_(train.rows()), k_(k) {
  const auto kind = train.target().kind();
  if (kind != TargetKind::kLabels && kind != TargetKind::kProbabilities) {
    throw ConfigError("knn black box needs a classification dataset");
  }
  if (train.size() == 0 || k == 0) {
    throw ParameterError("knn needs k >= 1 and a non-empty training set");
  }
  labels_ = train.target().labels();
  classes_ = train.target().num_classes();
  const std::size_t d = train.arity();
  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = train.column(j);
    const double m = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
    double var = 0.0;
    for (const double v : col) var += (v - m) * (v - m);
    var /= static_cast<double>(col.size());
    mean_[j] = m;
    scale_[j] = var > 0 ? std::sqrt(var) : 1.0;
  }
  for (auto& p : points_) {
    for (std::size_t j = 0; j < d; ++j) p[j] = (p[j] - mean_[j]) / scale_[j];
  }
}

std::string KnnModel::describe() const { return "knn:" + std::to_string(k_); }

ProbabilityMatrix KnnModel::do_predict(const std::vector<Instance>& batch) {
  ProbabilityMatrix out;
  out.reserve(batch.size());
  const std::size_t k = std::min(k_, points_.size());
  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (const auto& x : batch) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double z = (x[j] - mean_[j]) / scale_[j] - points_[i][j];
        d2 += z * z;
      }
      dist[i] = {d2, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k),
                      dist.end());
    std::vector<double> row(classes_, 1.0);
    for (std::size_t i = 0; i < k; ++i) row[labels_[dist[i].second]] += 1.0;
    const double total = static_cast<double>(k + classes_);
    for (auto& v : row) v /= total;
    out.push_back(std::move(row));
  }
  return out;
}

// --- factory ---------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& spec) {
  const auto v = parse_double(s);
  if (!v) throw ParameterError("bad number '" + s + "' in black box '" + spec + "'");
  return *v;
}

std::size_t to_index(const std::string& s, const std::string& spec) {
  const double v = to_double(s, spec);
  if (v < 0 || std::floor(v) != v) {
    throw ParameterError("bad index '" + s + "' in black box '" + spec + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::unique_ptr<BlackBox> make_blackbox(const std::string& spec,
                                        std::size_t arity, InputMode mode,
                                        const TabularDataset* train,
                                        std::chrono::milliseconds timeout) {
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  if (name == "halfplane") {
    const std::size_t feature = parts.size() > 1 ? to_index(parts[1], spec) : 0;
    const double threshold = parts.size() > 2 ? to_double(parts[2], spec) : 0.5;
    return std::make_unique<HalfplaneModel>(std::max<std::size_t>(arity, 1),
                                            feature, threshold);
  }
  if (name == "checkerboard") {
    const int k = parts.size() > 1 ? static_cast<int>(to_index(parts[1], spec)) : 2;
    return std::make_unique<CheckerboardModel>(k, std::max<std::size_t>(arity, 2));
  }
  if (name == "band") {
    if (parts.size() != 4) {
      throw ParameterError("band expects band:feature:lower:upper");
    }
    return std::make_unique<BandModel>(std::max<std::size_t>(arity, 1),
                                       to_index(parts[1], spec),
                                       to_double(parts[2], spec),
                                       to_double(parts[3], spec));
  }
  if (name == "constant") {
    if (parts.size() != 2) throw ParameterError("constant expects constant:p0,p1,...");
    std::vector<double> probs;
    for (const auto& p : split(parts[1], ',')) probs.push_back(to_double(p, spec));
    return std::make_unique<ConstantModel>(arity, std::move(probs), mode);
  }
  if (name == "colour-mass" || name == "color-mass") {
    return std::make_unique<ColourMassModel>();
  }
  if (name == "knn") {
    if (!train) throw ConfigError("knn black box needs a training dataset");
    const std::size_t k = parts.size() > 1 ? to_index(parts[1], spec) : 5;
    return std::make_unique<KnnModel>(*train, k);
  }
  ExternalOptions options;
  options.mode = mode;
  options.arity = arity;
  options.timeout = timeout;
  return std::make_unique<ExternalBlackBox>(spec, options);
}

}  // namespace irkit
