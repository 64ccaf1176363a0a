// Copyright 2026 The structprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <filesystem>
#include <random>
#include <regex>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "structprobe/chart.hpp"
#include "structprobe/error.hpp"
#include "structprobe/experiment.hpp"
#include "structprobe/labels_io.hpp"
#include "structprobe/report.hpp"
#include "structprobe/synth.hpp"

namespace structprobe {
namespace {

namespace fs = std::filesystem;

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1))
    ++n;
  return n;
}

TEST(ReportTsv, RoundTrip) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::vector<ReportRow> rows;
  for (int r = 0; r < 200; ++r) {
    std::optional<double> value;
    if (r % 7) {
      double v;
      do {
        v = std::bit_cast<double>(bits(rng));
      } while (!std::isfinite(v));
      value = v;
    }
    rows.push_back({r % 5 ? std::to_string(r % 13) : "baseline", 1 + bits(rng) % 512,
                    r % 2 ? Task::kDepth : Task::kDistance, r % 2 ? "nspr" : "dspr", value,
                    bits(rng) % 10000});
  }
  const std::string text = format_report_tsv(rows);
  EXPECT_EQ(parse_report_tsv(text), rows);
  EXPECT_EQ(format_report_tsv(parse_report_tsv(text)), text);
}

TEST(ReportTsv, HeaderAndNa) {
  const std::vector<ReportRow> rows{{"3", 64, Task::kDepth, "nspr", std::nullopt, 0},
                                    {"3", 64, Task::kDepth, "root_acc", 0.5, 12}};
  EXPECT_EQ(format_report_tsv(rows),
            "layer\trank\ttask\tmetric\tvalue\tn_sequences\n"
            "3\t64\tdepth\tnspr\tNA\t0\n"
            "3\t64\tdepth\troot_acc\t0.5\t12\n");
}

TEST(ReportTsv, Errors) {
  EXPECT_THROW(parse_report_tsv(""), ParseError);
  EXPECT_THROW(parse_report_tsv("a\tb\n"), ParseError);
  EXPECT_THROW(parse_report_tsv("layer\trank\ttask\tmetric\tvalue\tn_sequences\n0\t1\tdepth\n"),
               ParseError);
  EXPECT_THROW(parse_report_tsv("layer\trank\ttask\tmetric\tvalue\tn_sequences\n"
                                "0\tx\tdepth\tnspr\t1\t1\n"),
               ParseError);
  const std::vector<ReportRow> bad{{"a\tb", 1, Task::kDepth, "nspr", 1.0, 1}};
  EXPECT_THROW(format_report_tsv(bad), ValidationError);
}

TEST(ReportRows, PerTask) {
  EvalReport r;
  r.layer = "2";
  r.rank = 32;
  r.task = Task::kDepth;
  r.spearman = 0.9;
  r.spearman_sequences = 3;
  r.sequences.resize(4);
  auto rows = report_rows(r);
  ASSERT_EQ(rows.size(), 1u);  // no root_acc for unrooted labels
  EXPECT_EQ(rows[0].metric, "nspr");
  r.root_acc = 1.0;
  rows = report_rows(r);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].n_sequences, 4u);
  r.task = Task::kDistance;
  rows = report_rows(r);
  EXPECT_EQ(rows[0].metric, "dspr");
  EXPECT_EQ(rows[1].metric, "uuas");
  EXPECT_FALSE(rows[1].value.has_value());
}

TEST(Chart, GoldenFile) {
  const auto rows = read_report_tsv(std::string(STRUCTPROBE_TEST_DATA) + "/chart_report.tsv");
  ChartOptions options;
  options.model = "bert";
  EXPECT_EQ(render_chart(rows, "dspr", options),
            testing::slurp(std::string(STRUCTPROBE_TEST_DATA) + "/chart_dspr.svg"));
}

TEST(Chart, OneSeriesTwoLayers) {
  const std::vector<ReportRow> rows{{"0", 128, Task::kDistance, "dspr", 0.5, 10},
                                    {"1", 128, Task::kDistance, "dspr", 0.7, 10}};
  const std::string svg = render_chart(rows, "dspr");
  EXPECT_EQ(count(svg, "<polyline"), 1u);
  const std::regex points("points=\"([^\"]*)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, points));
  EXPECT_EQ(count(m[1].str(), ","), 2u);
  EXPECT_EQ(count(m[1].str(), " "), 1u);
}

TEST(Chart, AxisSpansUnitIntervalForDspr) {
  const std::vector<ReportRow> rows{{"0", 128, Task::kDistance, "dspr", 0.5, 10},
                                    {"1", 128, Task::kDistance, "dspr", 0.7, 10}};
  const std::string svg = render_chart(rows, "dspr");
  EXPECT_NE(svg.find(">0.00</text>"), std::string::npos);
  EXPECT_NE(svg.find(">1.00</text>"), std::string::npos);
  EXPECT_EQ(svg.find(">-1.00</text>"), std::string::npos);

  const std::vector<ReportRow> negative{{"0", 128, Task::kDistance, "dspr", -0.2, 10}};
  EXPECT_NE(render_chart(negative, "dspr").find(">-1.00</text>"), std::string::npos);
}

TEST(Chart, SeriesPerRankAndBaselines) {
  const std::vector<ReportRow> rows{{"0", 32, Task::kDistance, "uuas", 0.5, 10},
                                    {"1", 32, Task::kDistance, "uuas", 0.6, 10},
                                    {"0", 64, Task::kDistance, "uuas", 0.55, 10},
                                    {"1", 64, Task::kDistance, "uuas", 0.65, 10},
                                    {"baseline", 32, Task::kDistance, "uuas", 0.3, 10}};
  const std::string svg = render_chart(rows, "uuas");
  EXPECT_EQ(count(svg, "<polyline"), 3u);
  EXPECT_EQ(count(svg, "stroke-dasharray"), 2u);  // baseline line and its legend swatch
  EXPECT_NE(svg.find("probe (rank 64)"), std::string::npos);
}

TEST(Chart, Errors) {
  const std::vector<ReportRow> rows{{"0", 128, Task::kDistance, "dspr", 0.5, 10}};
  EXPECT_THROW(render_chart(rows, "accuracy"), ValidationError);
  EXPECT_THROW(render_chart(rows, "nspr"), ValidationError);
}

TEST(Manifest, Parse) {
  const auto m = parse_manifest(R"({
    "model": "bert", "task": ["distance", "depth"],
    "labels": {"train": "l/train.jsonl", "val": "l/val.jsonl"},
    "layers": [{"layer": 0, "train": "e0t", "val": "e0v"},
               {"layer": 1, "train": "e1t", "val": "/abs/e1v"}],
    "baselines": [{"tag": "baseline", "train": "bt", "val": "bv"}],
    "ranks": [32, 64],
    "train": {"batch_size": 8, "step_rule": "sgd", "learning_rate": 0.1},
    "eval": {"spearman": "matrix", "exclude_deprels": ["punct"], "min_length": 3},
    "output_dir": "out"})",
                                "/base");
  EXPECT_EQ(m.model, "bert");
  EXPECT_EQ(m.tasks, (std::vector<Task>{Task::kDistance, Task::kDepth}));
  EXPECT_EQ(m.labels.train, fs::path("/base/l/train.jsonl"));
  ASSERT_EQ(m.layers.size(), 2u);
  EXPECT_EQ(m.layers[1].tag, "1");
  EXPECT_EQ(m.layers[1].paths.val, fs::path("/abs/e1v"));
  EXPECT_EQ(m.baselines.at(0).tag, "baseline");
  EXPECT_EQ(m.ranks, (std::vector<std::size_t>{32, 64}));
  EXPECT_EQ(m.train.batch_size, 8u);
  EXPECT_EQ(m.train.step_rule, StepRule::kSgd);
  EXPECT_EQ(m.eval.spearman_mode, SpearmanMode::kWholeMatrix);
  EXPECT_EQ(m.eval.lengths.min, 3u);
  EXPECT_EQ(m.output_dir, fs::path("/base/out"));
}

TEST(Manifest, Validation) {
  const std::string head =
      R"({"task": "distance", "labels": {"train": "a", "val": "b"}, )";
  EXPECT_THROW(parse_manifest(head + R"("layers": []})"), ValidationError);
  EXPECT_THROW(parse_manifest(head + R"("layers": [{"layer": 0, "train": "x", "val": "y"}],
                                        "ranks": []})"),
               ValidationError);
  EXPECT_THROW(parse_manifest(head + R"("layers": [{"layer": 0, "train": "x", "val": "y"},
                                                   {"layer": 0, "train": "x", "val": "y"}]})"),
               ValidationError);
  EXPECT_THROW(parse_manifest(head + R"("layers": [{"layer": 0, "train": "x", "val": "y"}],
                                        "baselines": [{"tag": "7", "train": "x", "val": "y"}]})"),
               ValidationError);
  EXPECT_THROW(parse_manifest(head + R"("layers": [{"layer": 0, "train": "x", "val": "y"}],
                                        "eval": {"spearman": "diag"}})"),
               ValidationError);
  EXPECT_THROW(parse_manifest(R"({"task": "pos"})"), Error);
  EXPECT_THROW(parse_manifest("{"), ParseError);
  EXPECT_THROW(parse_manifest(head + R"("layers": [{"train": "x", "val": "y"}]})"), ParseError);
}

class GridTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "structprobe_grid_test" /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    OracleConfig cfg;
    cfg.n_trees = 150;
    cfg.max_n = 20;
    cfg.extra_dims = 4;
    cfg.seed = 1;
    const OracleDataset train = make_oracle_dataset(cfg);
    cfg.n_trees = 40;
    cfg.seed = 2;
    cfg.id_prefix = "v-";
    const OracleDataset val = make_oracle_dataset(cfg);
    write_labels_jsonl(dir_ / "train.labels.jsonl", train.labels);
    write_labels_jsonl(dir_ / "val.labels.jsonl", val.labels);
    write_embeddings(train.embeddings, dir_ / "train.emb.jsonl");
    write_embeddings(val.embeddings, dir_ / "val.emb.jsonl");
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentManifest manifest(const std::string& out) const {
    return parse_manifest(R"({"task": "distance",
      "labels": {"train": "train.labels.jsonl", "val": "val.labels.jsonl"},
      "layers": [{"layer": 0, "train": "train.emb.jsonl", "val": "val.emb.jsonl"},
                 {"layer": 1, "train": "train.emb.jsonl", "val": "val.emb.jsonl"}],
      "ranks": [32], "train": {"seed": 3}, "output_dir": ")" + out + "\"}",
                          dir_);
  }

  fs::path dir_;
};

TEST_F(GridTest, TwoLayersOnOracleData) {
  const GridResult result = run_layer_grid(manifest("a"));
  ASSERT_EQ(result.reports.size(), 2u);
  EXPECT_TRUE(result.failures.empty());
  for (const auto& r : result.reports) EXPECT_GE(*r.spearman, 0.95) << r.layer;
  EXPECT_TRUE(fs::exists(dir_ / "a" / "report.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "dspr.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "uuas.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "probes" / "distance-1-r32.json"));
  EXPECT_EQ(read_report_tsv(dir_ / "a" / "report.tsv").size(), 4u);
}

TEST_F(GridTest, RerunIsByteIdenticalAcrossWorkerCounts) {
  run_layer_grid(manifest("a"), {1, true});
  run_layer_grid(manifest("b"), {3, true});
  for (const char* name : {"report.tsv", "dspr.svg", "uuas.svg", "cells/distance-0-r32.json"})
    EXPECT_EQ(testing::slurp((dir_ / "a" / name).string()),
              testing::slurp((dir_ / "b" / name).string()))
        << name;
}

TEST_F(GridTest, MismatchedDataFailsBeforeTraining) {
  OracleConfig cfg;
  cfg.n_trees = 10;
  cfg.max_n = 8;
  write_embeddings(make_oracle_dataset(cfg).embeddings, dir_ / "bad.emb.jsonl");
  auto m = manifest("c");
  m.layers[1].paths.val = dir_ / "bad.emb.jsonl";
  EXPECT_THROW(run_layer_grid(m), ValidationError);
  EXPECT_FALSE(fs::exists(dir_ / "c"));
}

}  // namespace
}  // namespace structprobe
