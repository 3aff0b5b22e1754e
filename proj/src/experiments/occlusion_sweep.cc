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

#include "irkit/experiments/occlusion_sweep.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "irkit/core/encoding.h"
#include "irkit/core/error.h"
#include "irkit/core/parallel.h"
#include "irkit/core/rng.h"

namespace irkit::experiments {
namespace {

// Occluded images are predicted in chunks to bound memory.
constexpr std::size_t kPredictChunk = 32;

struct Cell {
  std::vector<double> squared_errors;
  std::size_t errors = 0;
};

// Per-image observations indexed [strategy][count][k].
using ImageCells = std::vector<std::vector<std::vector<Cell>>>;

struct ImageOutcome {
  bool used = false;
  std::string warning;
  ImageCells cells;
};

ImageOutcome run_image(const SweepImage& item, BlackBox& bb,
                       const SweepConfig& config) {
  ImageOutcome out;
  ProbabilityMatrix base;
  try {
    base = bb.predict_images({item.image});
  } catch (const BackendError& e) {
    out.warning = "image '" + item.id + "' skipped: " + e.what();
    return out;
  }
  const std::size_t top = static_cast<std::size_t>(argmax(base[0]));
  const double p0 = base[0][top];
  out.used = true;

  const RngStream image_rng = RngStream(config.seed).substream("sweep").substream(item.id);
  out.cells.assign(config.strategies.size(),
                   std::vector<std::vector<Cell>>(config.segment_counts.size()));
  for (std::size_t ni = 0; ni < config.segment_counts.size(); ++ni) {
    const int n = config.segment_counts[ni];
    const image::Segmentation seg = image::slic_segment(
        item.image, {n, config.compactness, config.iterations});
    const std::size_t s = seg.segment_count();

    RngStream mask_rng = image_rng.substream(static_cast<std::uint64_t>(n));
    std::vector<BinaryIR> masks;
    std::vector<int> mask_k;
    for (std::size_t k = 0; k <= s; ++k) {
      const std::size_t reps = (k == 0 || k == s) ? 1 : config.repeats;
      for (std::size_t r = 0; r < reps; ++r) {
        BinaryIR keep = BinaryIR::Ones(s);
        for (const auto j : mask_rng.sample_without_replacement(s, k)) {
          keep.bits[j] = 0;
        }
        masks.push_back(std::move(keep));
        mask_k.push_back(static_cast<int>(k));
      }
    }

    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
      const auto strategy = config.strategies[si];
      auto& cells = out.cells[si][ni];
      cells.assign(static_cast<std::size_t>(n) + 1, Cell{});
      RngStream colour_rng = mask_rng.substream(image::strategy_name(strategy));
      for (std::size_t start = 0; start < masks.size(); start += kPredictChunk) {
        const std::size_t end = std::min(masks.size(), start + kPredictChunk);
        std::vector<image::Image> batch;
        batch.reserve(end - start);
        for (std::size_t m = start; m < end; ++m) {
          batch.push_back(image::occlude(item.image, seg, masks[m], strategy, colour_rng));
        }
        try {
          const ProbabilityMatrix p = bb.predict_images(batch);
          for (std::size_t m = start; m < end; ++m) {
            const double d = p[m - start][top] - p0;
            cells[mask_k[m]].squared_errors.push_back(d * d);
          }
        } catch (const BackendError&) {
          for (std::size_t m = start; m < end; ++m) ++cells[mask_k[m]].errors;
        }
      }
    }
  }
  return out;
}

}  // namespace

SweepResult occlusion_sweep(const std::vector<SweepImage>& images, BlackBox& bb,
                            const SweepConfig& config) {
  if (config.repeats < 1) throw ParameterError("repeats must be >= 1");
  if (config.segment_counts.empty() || config.strategies.empty()) {
    throw ParameterError("sweep needs at least one segment count and strategy");
  }
  for (const int n : config.segment_counts) {
    if (n < 1) throw ParameterError("segment counts must be >= 1");
  }
  if (bb.mode() != InputMode::kImage) {
    throw ParameterError("occlusion sweep needs an image black box");
  }

  std::vector<ImageOutcome> outcomes(images.size());
  parallel_for(images.size(), config.jobs, [&](std::size_t i) {
    outcomes[i] = run_image(images[i], bb, config);
  });

  SweepResult result;
  for (const auto& o : outcomes) {
    if (o.used) ++result.images_used;
    if (!o.warning.empty()) result.warnings.push_back(o.warning);
  }
  if (!images.empty() && result.images_used == 0) {
    throw BackendError("no image could be evaluated by the black box",
                       result.warnings.empty() ? "" : result.warnings.front());
  }

  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    for (std::size_t ni = 0; ni < config.segment_counts.size(); ++ni) {
      const int n = config.segment_counts[ni];
      for (int k = 0; k <= n; ++k) {
        SweepRow row;
        row.strategy = config.strategies[si];
        row.n_segments = n;
        row.k = k;
        double sum = 0.0;
        for (const auto& o : outcomes) {
          if (!o.used) continue;
          const Cell& c = o.cells[si][ni][k];
          for (const double e : c.squared_errors) sum += e;
          row.n_obs += c.squared_errors.size();
          row.errors += c.errors;
        }
        if (row.n_obs == 0) {
          row.mse_mean = row.mse_std = std::numeric_limits<double>::quiet_NaN();
        } else {
          row.mse_mean = sum / static_cast<double>(row.n_obs);
          double ss = 0.0;
          for (const auto& o : outcomes) {
            if (!o.used) continue;
            for (const double e : o.cells[si][ni][k].squared_errors) {
              ss += (e - row.mse_mean) * (e - row.mse_mean);
            }
          }
          row.mse_std = std::sqrt(ss / static_cast<double>(row.n_obs));
        }
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

std::vector<SweepImage> load_image_dir(const std::filesystem::path& dir,
                                       int resize_to) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no PNG images in " + dir.string());
  std::vector<SweepImage> out;
  for (const auto& f : files) {
    image::Image img = image::read_png(f);
    if (resize_to > 0) img = image::resize(img, resize_to, resize_to);
    out.push_back({f.filename().string(), std::move(img)});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "strategy,n_segments,k,mse_mean,mse_std,n_obs,errors\n";
  for (const auto& r : result.rows) {
    out << image::strategy_name(r.strategy) << ',' << r.n_segments << ',' << r.k
        << ',' << format_double(r.mse_mean) << ',' << format_double(r.mse_std)
        << ',' << r.n_obs << ',' << r.errors << '\n';
  }
}

void write_sweep_series_csv(std::ostream& out, const SweepResult& result,
                            int n_segments) {
  std::vector<image::OcclusionStrategy> strategies;
  for (const auto& r : result.rows) {
    if (r.n_segments == n_segments &&
        std::find(strategies.begin(), strategies.end(), r.strategy) ==
            strategies.end()) {
      strategies.push_back(r.strategy);
    }
  }
  out << 'k';
  for (const auto s : strategies) out << ',' << image::strategy_name(s);
  out << '\n';
  for (int k = 0; k <= n_segments; ++k) {
    out << k;
    for (const auto s : strategies) {
      for (const auto& r : result.rows) {
        if (r.n_segments == n_segments && r.strategy == s && r.k == k) {
          out << ',' << format_double(r.mse_mean);
        }
      }
    }
    out << '\n';
  }
}

}  // namespace irkit::experiments
