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

#include "irkit/cli/cli.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "irkit/core/blackbox.h"
#include "irkit/core/datasets.h"
#include "irkit/core/encoding.h"
#include "irkit/core/error.h"
#include "irkit/core/rng.h"
#include "irkit/experiments/occlusion_sweep.h"
#include "irkit/experiments/ols_report.h"
#include "irkit/experiments/purity_benchmark.h"
#include "irkit/image/segmentation.h"
#include "irkit/surrogate/explain.h"
#include "irkit/tabular/sampling.h"

namespace irkit::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A usage problem detected after parsing (missing seed, bad list syntax).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Options whose value may also come from the --config file. Command-line
// values win, then the file, then the built-in default.
class Bindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key,
                   T& var, const std::string& help) {
    CLI::Option* o = app->add_option(flag, var, help)->capture_default_str();
    entries_.push_back({app, key, o, [&var](const json& j) { var = j.get<T>(); },
                        [&var] { return json(var); }, nullptr});
    return o;
  }
  CLI::Option* flag(CLI::App* app, const std::string& flag, const std::string& key,
                    bool& var, const std::string& help) {
    CLI::Option* o = app->add_flag(flag, var, help);
    entries_.push_back({app, key, o, [&var](const json& j) { var = j.get<bool>(); },
                        [&var] { return json(var); }, nullptr});
    return o;
  }
  // Optional values with no default: absent unless given.
  template <typename T>
  CLI::Option* optional(CLI::App* app, const std::string& flag,
                        const std::string& key, std::optional<T>& var,
                        const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* o = app->add_option(flag, *holder, help);
    holders_.push_back(holder);
    entries_.push_back({app, key, o,
                        [&var](const json& j) {
                          if (!j.is_null()) var = j.get<T>();
                        },
                        [&var] { return var ? json(*var) : json(nullptr); },
                        [&var, holder] { var = *holder; }});
    return o;
  }

  // Applies the config file to the options of `app` not given on the command
  // line and returns the resolved configuration of that subcommand.
  json resolve(const CLI::App* app, const json& file) {
    json resolved = json::object();
    for (auto& e : entries_) {
      if (e.owner != app) continue;
      if (e.option->count() > 0) {
        if (e.take) e.take();
      } else if (file.contains(e.key)) {
        try {
          e.load(file.at(e.key));
        } catch (const json::exception& ex) {
          throw UsageError("config key '" + e.key + "': " + ex.what());
        }
      }
      resolved[e.key] = e.dump();
    }
    return resolved;
  }

 private:
  struct Entry {
    const CLI::App* owner;
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> load;
    std::function<json()> dump;
    std::function<void()> take;
  };
  std::vector<Entry> entries_;
  std::vector<std::shared_ptr<void>> holders_;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    json j = json::parse(in);
    // A manifest carries its resolved configuration under "config".
    if (j.is_object() && j.contains("config") && j.contains("command")) {
      return j.at("config");
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text, char sep) {
  std::vector<double> out;
  for (const auto& part : split(text, sep)) {
    const auto v = parse_double(part);
    if (!v) throw UsageError("not a number: '" + part + "'");
    out.push_back(*v);
  }
  return out;
}

// Shared state of one invocation.
struct Context {
  std::string command;
  std::vector<std::string> argv;
  json config;
  std::optional<std::uint64_t> seed;
  json inputs = json::object();
  std::string started;
  std::optional<fs::path> out_dir;

  void add_input(const fs::path& path) {
    inputs[path.string()] = sha256_file(path);
  }

  fs::path prepare_out() {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir->string() + ": " + ec.message());
    return *out_dir;
  }

  void write_manifest() {
    json m;
    m["command"] = command;
    m["argv"] = argv;
    m["config"] = config;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["version"] = IRKIT_VERSION;
    m["inputs"] = inputs;
    m["started_at"] = started;
    m["finished_at"] = utc_timestamp();
    write_text(*out_dir / "manifest.json", m.dump(2) + "\n");
  }
};

struct DataOptions {
  std::string dataset;
  std::string csv;
  std::string target = "label";
  std::string target_kind = "labels";
  std::string data_dir;

  void bind(Bindings& b, CLI::App* app) {
    b.add(app, "--dataset", "dataset", dataset,
          "Builtin dataset: wine, breast_cancer, housing, diabetes");
    b.add(app, "--csv", "csv", csv, "CSV file (all non-target columns numerical)");
    b.add(app, "--target", "target", target, "Target column of --csv");
    b.add(app, "--target-kind", "target_kind", target_kind,
          "labels or numeric (for --csv)")
        ->check(CLI::IsMember({"labels", "numeric"}));
    b.add(app, "--data-dir", "data_dir", data_dir,
          "Dataset cache directory (default: $IRKIT_CACHE, then bundled data)");
  }

  TabularDataset load(Context& ctx) const {
    if (!dataset.empty() == !csv.empty()) {
      throw UsageError("give exactly one of --dataset or --csv");
    }
    if (!dataset.empty()) {
      const auto info = find_dataset(dataset);
      if (!info) throw UsageError("unknown dataset '" + dataset + "'");
      const fs::path dir = resolve_data_dir(
          data_dir.empty() ? std::nullopt : std::optional<fs::path>(data_dir));
      const fs::path file = dir / info->file;
      if (!fs::exists(file)) {
        throw IoError("dataset file " + file.string() +
                      " not found; run scripts/fetch_datasets.py");
      }
      ctx.add_input(file);
      return load_builtin_dataset(dataset, dir);
    }
    const fs::path file(csv);
    if (!fs::exists(file)) throw IoError("no such file: " + csv);
    std::vector<std::string> names;
    for (const auto& h : read_csv_header(file)) {
      if (h != target) names.push_back(h);
    }
    ctx.add_input(file);
    return load_tabular_csv(file, FeatureSchema::Numerical(names), target,
                            target_kind == "numeric" ? TargetParse::kNumeric
                                                     : TargetParse::kLabels);
  }
};

std::unique_ptr<BlackBox> tabular_blackbox(const std::string& spec,
                                           const TabularDataset& ds,
                                           long timeout_ms) {
  if (spec.empty()) {
    if (ds.target().kind() != TargetKind::kLabels) {
      throw UsageError("regression datasets need an explicit --blackbox");
    }
    return make_blackbox("knn:5", ds.arity(), InputMode::kTabular, &ds,
                         std::chrono::milliseconds(timeout_ms));
  }
  return make_blackbox(spec, ds.arity(), InputMode::kTabular, &ds,
                       std::chrono::milliseconds(timeout_ms));
}

std::uint64_t require_seed(const Context& ctx) {
  if (!ctx.seed) throw UsageError("--seed is required for " + ctx.command);
  return *ctx.seed;
}

// ---- explain ---------------------------------------------------------------

struct ExplainOptions {
  DataOptions data;
  std::size_t row = 0;
  std::string ir = "quantile:4";
  std::string surrogate = "ols";
  std::size_t n = 1000;
  double scale = 1.0;
  double flip = 1.0;
  std::optional<std::size_t> target_class;
  std::string target_mode = "probability";
  double kernel_width = 0.0;
  std::size_t ir_min_leaf = 5;
  std::string blackbox;
  long timeout_ms = 30000;
};

int run_explain(const ExplainOptions& o, Context& ctx, std::ostream& out) {
  const std::uint64_t seed = require_seed(ctx);
  const TabularDataset ds = o.data.load(ctx);
  if (o.row >= ds.size()) {
    throw UsageError("--row " + std::to_string(o.row) + " out of range (" +
                     std::to_string(ds.size()) + " rows)");
  }
  surrogate::IrSpec ir;
  surrogate::SurrogateConfig cfg;
  try {
    ir = surrogate::IrSpec::Parse(o.ir);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (o.surrogate == "ols") {
    cfg.kind = surrogate::SurrogateKind::kOls;
  } else if (o.surrogate.rfind("tree", 0) == 0) {
    cfg.kind = surrogate::SurrogateKind::kTree;
    if (o.surrogate.size() > 4) {
      const auto v = parse_double(o.surrogate.substr(5));
      if (o.surrogate[4] != ':' || !v || *v < 2) {
        throw UsageError("--surrogate must be ols or tree[:max_leaves]");
      }
      cfg.tree_max_leaves = static_cast<std::size_t>(*v);
    }
  } else {
    throw UsageError("--surrogate must be ols or tree[:max_leaves]");
  }
  cfg.n = o.n;
  cfg.sampler.scale = o.scale;
  cfg.sampler.flip = o.flip;
  cfg.target_class = o.target_class;
  cfg.target_mode = o.target_mode == "crisp" ? surrogate::TargetMode::kCrisp
                                             : surrogate::TargetMode::kProbability;
  cfg.kernel_width = o.kernel_width;
  cfg.ir_min_leaf = o.ir_min_leaf;

  auto bb = tabular_blackbox(o.blackbox, ds, o.timeout_ms);
  RngStream rng = RngStream(seed).substream("explain");
  const auto e = surrogate::explain_tabular(ds.row(o.row), *bb, ds, ir, cfg, rng);
  json j = e.to_json();
  j["row"] = o.row;
  j["blackbox"] = bb->describe();
  const std::string text = j.dump(2) + "\n";
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    write_text(dir / "explanation.json", text);
    std::ostringstream csv;
    e.write_csv(csv);
    write_text(dir / "explanation.csv", csv.str());
    ctx.write_manifest();
  } else {
    out << text;
  }
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  std::string images;
  std::string blackbox = "colour-mass";
  std::string segments = "5,10,15,20,30,40";
  std::string strategies = "all";
  std::size_t repeats = 20;
  double compactness = 10.0;
  int iterations = 10;
  int resize = 256;
  long timeout_ms = 30000;
};

int run_sweep(const SweepOptions& o, std::size_t jobs, Context& ctx,
              std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = require_seed(ctx);
  if (o.images.empty()) throw UsageError("--images is required");
  experiments::SweepConfig cfg;
  cfg.seed = seed;
  cfg.repeats = o.repeats;
  cfg.compactness = o.compactness;
  cfg.iterations = o.iterations;
  cfg.jobs = jobs;
  cfg.segment_counts.clear();
  for (const auto n : parse_size_list(o.segments)) {
    cfg.segment_counts.push_back(static_cast<int>(n));
  }
  if (o.strategies != "all") {
    cfg.strategies.clear();
    for (const auto& s : split(o.strategies, ',')) {
      cfg.strategies.push_back(image::parse_strategy(s));
    }
  }
  const auto images = experiments::load_image_dir(o.images, o.resize);
  for (const auto& img : images) ctx.add_input(fs::path(o.images) / img.id);

  auto bb = make_blackbox(o.blackbox, 0, InputMode::kImage, nullptr,
                          std::chrono::milliseconds(o.timeout_ms));
  const auto result = experiments::occlusion_sweep(images, *bb, cfg);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  std::ostringstream csv;
  experiments::write_sweep_csv(csv, result);
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    write_text(dir / "sweep.csv", csv.str());
    for (const int n : cfg.segment_counts) {
      std::ostringstream series;
      experiments::write_sweep_series_csv(series, result, n);
      write_text(dir / ("sweep_n" + std::to_string(n) + ".csv"), series.str());
    }
    ctx.write_manifest();
  } else {
    out << csv.str();
  }
  return kExitOk;
}

// ---- purity-bench ----------------------------------------------------------

struct PurityOptions {
  DataOptions data;
  std::string widths = "2..256";
  double radius = 0.6;
  int q = 4;
  bool standardize = false;
  std::size_t min_leaf = 1;
  bool no_local = false;
};

int run_purity(const PurityOptions& o, std::size_t jobs, Context& ctx,
               std::ostream& out) {
  experiments::PurityBenchConfig cfg;
  cfg.widths = parse_size_list(o.widths);
  cfg.radius_fraction = o.radius;
  cfg.q = o.q;
  cfg.standardize = o.standardize;
  cfg.min_leaf = o.min_leaf;
  cfg.local = !o.no_local;
  cfg.jobs = jobs;
  const TabularDataset ds = o.data.load(ctx);
  const auto result = experiments::purity_benchmark(ds, cfg);
  std::ostringstream csv;
  experiments::write_purity_csv(csv, result);
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    write_text(dir / "purity.csv", csv.str());
    write_text(dir / "purity.json", result.to_json().dump(2) + "\n");
    ctx.write_manifest();
  } else {
    out << csv.str();
  }
  return kExitOk;
}

// ---- ols-report ------------------------------------------------------------

struct OlsOptions {
  std::string outputs = "0,1,1";
  std::size_t anchor_bin = 1;
  std::size_t anchor_count = 100;
  std::size_t base_count = 100;
  std::string ratios = "1:1,2:1,3:1,1:2,1:3";
  double noise = 0.0;
};

int run_ols(const OlsOptions& o, Context& ctx, std::ostream& out) {
  const std::uint64_t seed = require_seed(ctx);
  experiments::OlsScenario sc;
  sc.bin_outputs = parse_double_list(o.outputs, ',');
  sc.anchor_bin = o.anchor_bin;
  sc.anchor_count = o.anchor_count;
  sc.off_base_count = o.base_count;
  sc.noise = o.noise;
  sc.ratios.clear();
  for (const auto& r : split(o.ratios, ',')) {
    sc.ratios.push_back(parse_double_list(r, ':'));
  }
  RngStream rng = RngStream(seed).substream("ols-report");
  const auto rows = experiments::ols_sensitivity_report(sc, rng);
  std::ostringstream csv;
  experiments::write_ols_report_csv(csv, rows);
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    write_text(dir / "ols_report.csv", csv.str());
    ctx.write_manifest();
  } else {
    out << csv.str();
  }
  return kExitOk;
}

// ---- segment ---------------------------------------------------------------

struct SegmentOptions {
  std::string image;
  int n = 10;
  double compactness = 10.0;
  int iterations = 10;
  int resize = 0;
};

int run_segment(const SegmentOptions& o, Context& ctx, std::ostream& out) {
  if (o.image.empty()) throw UsageError("--image is required");
  if (!fs::exists(o.image)) throw IoError("no such file: " + o.image);
  image::Image img = image::read_png(o.image);
  ctx.add_input(o.image);
  if (o.resize > 0) img = image::resize(img, o.resize, o.resize);
  const auto seg = image::slic_segment(img, {o.n, o.compactness, o.iterations});
  json j;
  j["width"] = seg.width();
  j["height"] = seg.height();
  j["segments"] = seg.segment_count();
  j["sizes"] = seg.sizes_json();
  const std::string text = j.dump(2) + "\n";
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    seg.write_label_map(dir / "labels.png");
    write_text(dir / "segments.json", text);
    ctx.write_manifest();
  } else {
    out << text;
  }
  return kExitOk;
}

// ---- discretize ------------------------------------------------------------

struct DiscretizeOptions {
  DataOptions data;
  std::string ir = "quantile:4";
  std::string closure = "right";
  std::string blackbox;
  std::size_t ir_min_leaf = 5;
  std::optional<std::size_t> row;
  std::size_t samples = 0;
  double scale = 1.0;
  double flip = 1.0;
  long timeout_ms = 30000;
};

int run_discretize(const DiscretizeOptions& o, Context& ctx, std::ostream& out) {
  const TabularDataset ds = o.data.load(ctx);
  surrogate::IrSpec ir;
  try {
    ir = surrogate::IrSpec::Parse(o.ir);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  tabular::Discretization d;
  if (ir.kind == surrogate::IrSpec::Kind::kQuantile) {
    d = tabular::quantile_discretize(ds, static_cast<int>(ir.param),
                                     o.closure == "left"
                                         ? tabular::BinClosure::kLeftClosed
                                         : tabular::BinClosure::kRightClosed);
  } else {
    auto bb = tabular_blackbox(o.blackbox, ds, o.timeout_ms);
    d = surrogate::build_ir(ir, *bb, ds, o.ir_min_leaf);
  }
  json j;
  j["ir"] = ir.str();
  j["discretization"] = d.to_json();
  const auto enc = tabular::count_encodings(ds, d);
  j["encodings"] = {{"used", enc.used}, {"theoretical", enc.theoretical}};
  json bins = json::object();
  for (std::size_t f = 0; f < d.arity(); ++f) {
    json list = json::array();
    for (std::size_t b = 0; b < d.bin_count(f); ++b) list.push_back(d.describe_bin(f, b));
    bins[d.schema()[f].name] = list;
  }
  j["bins"] = bins;

  std::string samples_csv;
  if (o.row) {
    if (*o.row >= ds.size()) throw UsageError("--row out of range");
    const auto anchor = tabular::Anchor::Make(ds.row(*o.row), d);
    const auto local = tabular::count_encodings(ds, d, &anchor);
    j["row"] = *o.row;
    j["anchor_encodings"] = {{"used", local.used}, {"theoretical", local.theoretical}};
    if (o.samples > 0) {
      const std::uint64_t seed = require_seed(ctx);
      RngStream rng = RngStream(seed).substream("discretize");
      const auto s = tabular::sample_and_bind(anchor, d, tabular::summarize_features(ds),
                                              {o.scale, o.flip}, o.samples, rng);
      std::ostringstream csv;
      tabular::write_bound_samples_csv(csv, d, s);
      samples_csv = csv.str();
    }
  } else if (o.samples > 0) {
    throw UsageError("--samples needs --row");
  }

  const std::string text = j.dump(2) + "\n";
  if (ctx.out_dir) {
    const fs::path dir = ctx.prepare_out();
    write_text(dir / "discretization.json", text);
    if (!samples_csv.empty()) write_text(dir / "bound_samples.csv", samples_csv);
    ctx.write_manifest();
  } else {
    out << text << samples_csv;
  }
  return kExitOk;
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  auto parse_one = [&](const std::string& s) {
    const auto v = parse_double(s);
    if (!v || *v < 0 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
      throw ParameterError("not a non-negative integer: '" + s + "'");
    }
    return static_cast<std::size_t>(*v);
  };
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_one(part));
      continue;
    }
    const std::size_t lo = parse_one(part.substr(0, dots));
    const std::size_t hi = parse_one(part.substr(dots + 2));
    if (hi < lo) throw ParameterError("empty range '" + part + "'");
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ParameterError("empty list '" + text + "'");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"irkit: interpretable representations for surrogate explainers",
               "irkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(IRKIT_VERSION));

  Context ctx;
  ctx.started = utc_timestamp();
  ctx.argv = args;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;

  Bindings b;
  auto common = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", config_path,
                    "JSON config or a previous manifest.json; flags take precedence");
    sub->add_option("--out", out_dir, "Output directory (stdout when omitted)");
    b.optional(sub, "--seed", "seed", seed, "Master seed");
    if (with_jobs) {
      b.add(sub, "--jobs", "jobs", jobs, "Worker threads (0 = all cores)");
    }
  };

  ExplainOptions ex;
  CLI::App* explain = app.add_subcommand("explain", "Explain one row with a surrogate");
  common(explain, false);
  ex.data.bind(b, explain);
  b.add(explain, "--row", "row", ex.row, "Row to explain (0-based)");
  b.add(explain, "--ir", "ir", ex.ir, "quantile[:q] or tree[:max_leaves]");
  b.add(explain, "--surrogate", "surrogate", ex.surrogate, "ols or tree[:max_leaves]");
  b.add(explain, "--n", "n", ex.n, "Number of samples");
  b.add(explain, "--scale", "scale", ex.scale, "Sampling std in units of feature std");
  b.add(explain, "--flip", "flip", ex.flip, "Categorical redraw probability");
  b.optional(explain, "--class", "class", ex.target_class,
             "Explained class (default: top class of the row)");
  b.add(explain, "--target-mode", "target_mode", ex.target_mode,
        "probability or crisp")
      ->check(CLI::IsMember({"probability", "crisp"}));
  b.add(explain, "--kernel-width", "kernel_width", ex.kernel_width,
        "Exponential kernel width (0 = unweighted)");
  b.add(explain, "--ir-min-leaf", "ir_min_leaf", ex.ir_min_leaf,
        "Minimum leaf size of a tree IR");
  b.add(explain, "--blackbox", "blackbox", ex.blackbox,
        "Model spec or external command (default knn:5)");
  b.add(explain, "--timeout-ms", "timeout_ms", ex.timeout_ms, "External model timeout");

  SweepOptions sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Occlusion-strategy sweep over images");
  common(sweep, true);
  b.add(sweep, "--images", "images", sw.images, "Directory of PNG images");
  b.add(sweep, "--blackbox", "blackbox", sw.blackbox, "Image model spec or command");
  b.add(sweep, "--segments", "segments", sw.segments, "Segment counts, e.g. 5,10 or 5..8");
  b.add(sweep, "--strategies", "strategies", sw.strategies,
        "all or a comma list of black,white,red,green,blue,pink,mean,random");
  b.add(sweep, "--repeats", "repeats", sw.repeats, "Random masks per occlusion count");
  b.add(sweep, "--compactness", "compactness", sw.compactness, "SLIC compactness");
  b.add(sweep, "--iterations", "iterations", sw.iterations, "SLIC iterations");
  b.add(sweep, "--resize", "resize", sw.resize, "Resize to NxN first (0 = keep)");
  b.add(sweep, "--timeout-ms", "timeout_ms", sw.timeout_ms, "External model timeout");

  PurityOptions pu;
  CLI::App* purity = app.add_subcommand("purity-bench", "Quantile vs tree purity benchmark");
  common(purity, true);
  pu.data.bind(b, purity);
  b.add(purity, "--widths", "widths", pu.widths, "Tree widths, e.g. 2..256 or 2,4,8");
  b.add(purity, "--radius", "radius", pu.radius,
        "Neighbourhood radius as a fraction of the largest distance");
  b.add(purity, "--q", "q", pu.q, "Quantile count");
  b.flag(purity, "--standardize", "standardize", pu.standardize,
         "Neighbourhoods on z-scored features");
  b.add(purity, "--min-leaf", "min_leaf", pu.min_leaf, "Minimum tree leaf size");
  b.flag(purity, "--no-local", "no_local", pu.no_local, "Skip the local variant");

  OlsOptions ol;
  CLI::App* ols = app.add_subcommand("ols-report", "OLS coefficient sensitivity report");
  common(ols, false);
  b.add(ols, "--outputs", "outputs", ol.outputs, "Black-box output per bin");
  b.add(ols, "--anchor-bin", "anchor_bin", ol.anchor_bin, "Bin holding the anchor");
  b.add(ols, "--anchor-count", "anchor_count", ol.anchor_count, "Samples in the anchor bin");
  b.add(ols, "--base-count", "base_count", ol.base_count, "Samples per unit of ratio");
  b.add(ols, "--ratios", "ratios", ol.ratios, "Off-bin ratios, e.g. 1:1,3:1");
  b.add(ols, "--noise", "noise", ol.noise, "Gaussian output noise std");

  SegmentOptions sg;
  CLI::App* segment = app.add_subcommand("segment", "SLIC segmentation of one image");
  common(segment, false);
  b.add(segment, "--image", "image", sg.image, "PNG image");
  b.add(segment, "--n", "n", sg.n, "Number of segments");
  b.add(segment, "--compactness", "compactness", sg.compactness, "SLIC compactness");
  b.add(segment, "--iterations", "iterations", sg.iterations, "SLIC iterations");
  b.add(segment, "--resize", "resize", sg.resize, "Resize to NxN first (0 = keep)");

  DiscretizeOptions di;
  CLI::App* disc = app.add_subcommand("discretize", "Discretize a dataset");
  common(disc, false);
  di.data.bind(b, disc);
  b.add(disc, "--ir", "ir", di.ir, "quantile[:q] or tree[:max_leaves]");
  b.add(disc, "--closure", "closure", di.closure, "Quantile bin closure: left or right")
      ->check(CLI::IsMember({"left", "right"}));
  b.add(disc, "--blackbox", "blackbox", di.blackbox, "Model for tree IRs (default knn:5)");
  b.add(disc, "--ir-min-leaf", "ir_min_leaf", di.ir_min_leaf, "Minimum leaf size of a tree IR");
  b.optional(disc, "--row", "row", di.row, "Anchor row for binary encodings");
  b.add(disc, "--samples", "samples", di.samples, "Bound samples around --row");
  b.add(disc, "--scale", "scale", di.scale, "Sampling std in units of feature std");
  b.add(disc, "--flip", "flip", di.flip, "Categorical redraw probability");
  b.add(disc, "--timeout-ms", "timeout_ms", di.timeout_ms, "External model timeout");

  std::vector<std::string> argv{"irkit"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<char*> cargv;
  for (auto& a : argv) cargv.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    ctx.command = chosen->get_name();
    json file_config = json::object();
    if (!config_path.empty()) {
      file_config = read_json_file(config_path);
      ctx.add_input(config_path);
    }
    ctx.config = b.resolve(chosen, file_config);
    ctx.seed = seed;
    if (!out_dir.empty()) ctx.out_dir = fs::path(out_dir);

    if (chosen == explain) return run_explain(ex, ctx, out);
    if (chosen == sweep) return run_sweep(sw, jobs, ctx, out, err);
    if (chosen == purity) return run_purity(pu, jobs, ctx, out);
    if (chosen == ols) return run_ols(ol, ctx, out);
    if (chosen == segment) return run_segment(sg, ctx, out);
    return run_discretize(di, ctx, out);
  } catch (const UsageError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BackendError& e) {
    err << "irkit: black box failed: " << e.what() << '\n';
    if (!e.stderr_excerpt().empty()) err << e.stderr_excerpt() << '\n';
    return kExitBackend;
  } catch (const IoError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitIo;
  } catch (const SchemaError& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "irkit: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace irkit::cli
