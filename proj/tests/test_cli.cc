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
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "irkit/cli/cli.h"
#include "irkit/core/error.h"
#include "irkit/image/image.h"
#include "json.hpp"
#include "test_util.h"

namespace irkit::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kDataDir = testing::dataset_dir().string();

TEST(ParseSizeList, RangesAndLists) {
  EXPECT_EQ(parse_size_list("2..5"), (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_size_list("2,4,8"), (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(parse_size_list("1..2,10"), (std::vector<std::size_t>{1, 2, 10}));
  EXPECT_THROW(parse_size_list("5..2"), ParameterError);
  EXPECT_THROW(parse_size_list("a"), ParameterError);
  EXPECT_THROW(parse_size_list(""), ParameterError);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("purity-bench"), std::string::npos);
}

TEST(Cli, MissingSeedIsUsageError) {
  const auto r = invoke({"explain", "--dataset", "wine", "--data-dir", kDataDir, "--row", "1"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(Cli, MissingInputFileIsIoError) {
  EXPECT_EQ(invoke({"segment", "--image", "/nonexistent/x.png"}).code, kExitIo);
  EXPECT_EQ(invoke({"discretize", "--csv", "/nonexistent/x.csv"}).code, kExitIo);
}

TEST(Cli, UnreachableBackendIsBackendError) {
  const auto dir = testing::temp_dir("cli_backend");
  image::write_png(image::Image(8, 8, {10, 20, 30}), dir / "a.png");
  const auto r = invoke({"sweep", "--images", dir.string(), "--blackbox",
                         "/nonexistent/model --serve", "--seed", "1", "--segments", "2",
                         "--repeats", "1", "--timeout-ms", "2000"});
  EXPECT_EQ(r.code, kExitBackend) << r.err;
}

TEST(Cli, PurityBenchWritesCurvesAndManifest) {
  const auto dir = testing::temp_dir("cli_purity");
  const auto r = invoke({"purity-bench", "--dataset", "wine", "--data-dir", kDataDir,
                         "--widths", "2..4", "--no-local", "--seed", "7", "--out",
                         dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = slurp(dir / "purity.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "purity-bench");
  EXPECT_EQ(manifest.at("seed"), 7);
  EXPECT_EQ(manifest.at("config").at("widths"), "2..4");
  EXPECT_TRUE(manifest.contains("started_at"));
  EXPECT_TRUE(manifest.contains("finished_at"));
  EXPECT_EQ(manifest.at("inputs").size(), 1u);
}

TEST(Cli, ExplainIsDeterministicAndRanked) {
  const std::vector<std::string> args{"explain", "--dataset", "wine", "--data-dir", kDataDir,
                                      "--row", "17", "--ir", "tree:32", "--surrogate", "ols",
                                      "--n", "2000", "--seed", "3"};
  const auto a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  const auto& concepts = j.at("concepts");
  ASSERT_FALSE(concepts.empty());
  for (std::size_t i = 1; i < concepts.size(); ++i) {
    EXPECT_GE(std::abs(concepts[i - 1].at("coefficient").get<double>()),
              std::abs(concepts[i].at("coefficient").get<double>()));
  }
}

TEST(Cli, ManifestRerunReproducesOutputs) {
  const auto first = testing::temp_dir("cli_rerun_a");
  const auto second = testing::temp_dir("cli_rerun_b");
  const auto r1 = invoke({"ols-report", "--ratios", "1:1,3:1", "--noise", "0.1", "--seed",
                          "5", "--out", first.string()});
  ASSERT_EQ(r1.code, kExitOk) << r1.err;
  const auto r2 = invoke({"ols-report", "--config", (first / "manifest.json").string(),
                          "--out", second.string()});
  ASSERT_EQ(r2.code, kExitOk) << r2.err;
  EXPECT_EQ(slurp(first / "ols_report.csv"), slurp(second / "ols_report.csv"));
  const auto m = nlohmann::json::parse(slurp(second / "manifest.json"));
  EXPECT_EQ(m.at("seed"), 5);
}

TEST(Cli, FlagsOverrideConfigFileOverridesDefaults) {
  const auto dir = testing::temp_dir("cli_precedence");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"ratios": "2:1", "noise": 0.0, "outputs": "0,1,1"})";
  }
  auto run_with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"ols-report", "--config", (dir / "cfg.json").string(),
                                  "--seed", "1"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = invoke(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return r.out;
  };
  const auto from_file = run_with({});
  EXPECT_NE(from_file.find("2:1"), std::string::npos);
  EXPECT_EQ(std::count(from_file.begin(), from_file.end(), '\n'), 2);
  const auto from_flag = run_with({"--ratios", "1:2"});
  EXPECT_NE(from_flag.find("1:2"), std::string::npos);
  EXPECT_EQ(from_flag.find("2:1,"), std::string::npos);
}

TEST(Cli, SegmentWritesLabelMap) {
  const auto dir = testing::temp_dir("cli_segment");
  RngStream r(1);
  image::write_png(testing::random_image(r, 32, 24, false), dir / "in.png");
  const auto res = invoke({"segment", "--image", (dir / "in.png").string(), "--n", "6",
                           "--out", (dir / "out").string()});
  ASSERT_EQ(res.code, kExitOk) << res.err;
  int w = 0, h = 0;
  const auto labels = image::read_label_png(dir / "out" / "labels.png", &w, &h);
  EXPECT_EQ(w, 32);
  EXPECT_EQ(h, 24);
  const auto sizes = nlohmann::json::parse(slurp(dir / "out" / "segments.json"));
  std::size_t total = 0;
  EXPECT_EQ(sizes.at("segments"), sizes.at("sizes").size());
  for (const auto& [k, v] : sizes.at("sizes").items()) total += v.get<std::size_t>();
  EXPECT_EQ(total, labels.size());
}

TEST(Cli, DiscretizeBoundSamples) {
  const auto dir = testing::temp_dir("cli_disc");
  const auto r = invoke({"discretize", "--dataset", "diabetes", "--data-dir", kDataDir, "--row",
                         "3", "--samples", "20", "--seed", "2", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = slurp(dir / "bound_samples.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  const auto d = nlohmann::json::parse(slurp(dir / "discretization.json"));
  EXPECT_EQ(d.at("bins").at("age").size(), 4u);
  EXPECT_EQ(d.at("anchor_encodings").at("theoretical"), 1024.0);
}

TEST(Cli, InvalidParameterIsUsageError) {
  EXPECT_EQ(invoke({"ols-report", "--outputs", "0,1", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"purity-bench", "--dataset", "wine", "--data-dir", kDataDir, "--widths",
                    "9..2"})
                .code,
            kExitUsage);
}

}  // namespace
}  // namespace irkit::cli
