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

#ifndef IRKIT_CORE_BLACKBOX_H_
#define IRKIT_CORE_BLACKBOX_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irkit/core/dataset.h"
#include "irkit/image/image.h"

namespace irkit {

enum class InputMode { kTabular, kImage };

// Prediction contract shared by the builtin synthetic models and the external
// subprocess client. Every returned matrix has shape (batch, num_classes())
// and rows summing to 1 within 1e-6.
class BlackBox {
 public:
  virtual ~BlackBox() = default;

  virtual InputMode mode() const = 0;
  virtual std::size_t num_classes() const = 0;
  // Expected tabular instance width; 0 means "not fixed".
  virtual std::size_t arity() const { return 0; }
  virtual std::string describe() const = 0;

  ProbabilityMatrix predict(const std::vector<Instance>& batch);
  ProbabilityMatrix predict_images(const std::vector<image::Image>& batch);

 protected:
  virtual ProbabilityMatrix do_predict(const std::vector<Instance>& batch);
  virtual ProbabilityMatrix do_predict_images(
      const std::vector<image::Image>& batch);
};

// Throws ProtocolError unless `p` is (rows, classes) and row-stochastic.
void check_probabilities(const ProbabilityMatrix& p, std::size_t rows,
                         std::size_t classes);

// Class 1 iff x[feature] >= threshold, emitted with probability `confidence`.
class HalfplaneModel : public BlackBox {
 public:
  HalfplaneModel(std::size_t arity, std::size_t feature = 0,
                 double threshold = 0.5, double confidence = 0.99);
  InputMode mode() const override { return InputMode::kTabular; }
  std::size_t num_classes() const override { return 2; }
  std::size_t arity() const override { return arity_; }
  std::string describe() const override;

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;

 private:
  std::size_t arity_, feature_;
  double threshold_, confidence_;
};

// k x k checkerboard over the first two features on the unit square:
// class = (floor(k x0) + floor(k x1)) mod 2.
class CheckerboardModel : public BlackBox {
 public:
  explicit CheckerboardModel(int k, std::size_t arity = 2,
                             double confidence = 0.99);
  InputMode mode() const override { return InputMode::kTabular; }
  std::size_t num_classes() const override { return 2; }
  std::size_t arity() const override { return arity_; }
  std::string describe() const override;

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;

 private:
  int k_;
  std::size_t arity_;
  double confidence_;
};

// Class 1 iff lower <= x[feature] < upper.
class BandModel : public BlackBox {
 public:
  BandModel(std::size_t arity, std::size_t feature, double lower, double upper,
            double confidence = 0.99);
  InputMode mode() const override { return InputMode::kTabular; }
  std::size_t num_classes() const override { return 2; }
  std::size_t arity() const override { return arity_; }
  std::string describe() const override;

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;

 private:
  std::size_t arity_, feature_;
  double lower_, upper_, confidence_;
};

// Ignores its input.
class ConstantModel : public BlackBox {
 public:
  ConstantModel(std::size_t arity, std::vector<double> probabilities,
                InputMode mode = InputMode::kTabular);
  InputMode mode() const override { return mode_; }
  std::size_t num_classes() const override { return probabilities_.size(); }
  std::size_t arity() const override { return arity_; }
  std::string describe() const override;

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;
  ProbabilityMatrix do_predict_images(
      const std::vector<image::Image>& batch) override;

 private:
  std::size_t arity_;
  std::vector<double> probabilities_;
  InputMode mode_;
};

// Image model: P(class 1) = mean red intensity / 255.
class ColourMassModel : public BlackBox {
 public:
  InputMode mode() const override { return InputMode::kImage; }
  std::size_t num_classes() const override { return 2; }
  std::string describe() const override { return "colour-mass"; }

  static double red_mass(const image::Image& img);

 protected:
  ProbabilityMatrix do_predict_images(
      const std::vector<image::Image>& batch) override;
};

// k-nearest-neighbour classifier on z-scored features; probabilities are
// neighbour label frequencies with add-one smoothing. Gives real datasets a
// self-contained black box.
class KnnModel : public BlackBox {
 public:
  KnnModel(const TabularDataset& train, std::size_t k);
  InputMode mode() const override { return InputMode::kTabular; }
  std::size_t num_classes() const override { return classes_; }
  std::size_t arity() const override { return mean_.size(); }
  std::string describe() const override;

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;

 private:
  std::vector<Instance> points_;
  std::vector<int> labels_;
  std::vector<double> mean_, scale_;
  std::size_t classes_, k_;
};

struct ExternalOptions {
  InputMode mode = InputMode::kTabular;
  std::size_t arity = 0;
  std::chrono::milliseconds timeout{30000};
};

// Child process speaking newline-delimited JSON on stdin/stdout:
//   child  -> {"classes": <int>}                       (handshake)
//   parent -> {"id": n, "mode": "tabular"|"image", "instances": [...]}
//   child  -> {"id": n, "probabilities": [[...], ...]}
// Images travel as base64-encoded PNG strings. One request is in flight at a
// time; concurrent callers are serialised.
class ExternalBlackBox : public BlackBox {
 public:
  // Runs `command` through /bin/sh -c and waits for the handshake.
  // Throws BackendError if the child fails to start or handshake in time.
  ExternalBlackBox(std::string command, ExternalOptions options = {});
  ~ExternalBlackBox() override;
  ExternalBlackBox(const ExternalBlackBox&) = delete;
  ExternalBlackBox& operator=(const ExternalBlackBox&) = delete;

  InputMode mode() const override { return options_.mode; }
  std::size_t num_classes() const override { return classes_; }
  std::size_t arity() const override { return options_.arity; }
  std::string describe() const override { return "external:" + command_; }

 protected:
  ProbabilityMatrix do_predict(const std::vector<Instance>& batch) override;
  ProbabilityMatrix do_predict_images(
      const std::vector<image::Image>& batch) override;

 private:
  class Process;
  ProbabilityMatrix round_trip(const std::string& request_line,
                               std::size_t rows);

  std::string command_;
  ExternalOptions options_;
  std::unique_ptr<Process> process_;
  std::size_t classes_ = 0;
  long next_id_ = 0;
  std::mutex mutex_;
};

// Builds a black box from a textual spec:
//   halfplane[:feature[:threshold]]   checkerboard[:k]
//   band:feature:lower:upper          constant:p0,p1,...
//   colour-mass                       knn[:k]   (needs `train`)
// Anything else is treated as an external command line.
std::unique_ptr<BlackBox> make_blackbox(const std::string& spec,
                                        std::size_t arity, InputMode mode,
                                        const TabularDataset* train = nullptr,
                                        std::chrono::milliseconds timeout =
                                            std::chrono::milliseconds(30000));

}  // namespace irkit

#endif  // IRKIT_CORE_BLACKBOX_H_
