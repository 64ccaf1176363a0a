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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include <fmt/core.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "structprobe/labels_io.hpp"
#include "structprobe/metrics.hpp"
#include "structprobe/probe.hpp"
#include "structprobe/report.hpp"
#include "structprobe/scene_tree.hpp"
#include "structprobe/synth.hpp"
#include "structprobe/train.hpp"

namespace sp = structprobe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd identity(std::size_t width) {
  const auto w = static_cast<Eigen::Index>(width);
  return Eigen::MatrixXd::Identity(w, w);
}

// 1. Identity probe on noiseless oracle trees scores 1 everywhere.
Outcome oracle_exactness() {
  const auto start = std::chrono::steady_clock::now();
  sp::OracleConfig cfg;
  cfg.n_trees = 500;
  cfg.min_n = 5;
  cfg.max_n = 50;
  cfg.seed = 2026;
  const sp::Dataset data = sp::make_oracle_dataset(cfg).dataset();
  const sp::Probe dist(sp::Task::kDistance, identity(data.width()));
  const sp::Probe depth(sp::Task::kDepth, identity(data.width()));
  const sp::EvalReport d = sp::evaluate(dist, data);
  const sp::EvalReport h = sp::evaluate(depth, data);
  const double elapsed = seconds_since(start);

  const double worst = std::max({std::abs(d.spearman.value_or(0) - 1), std::abs(d.uuas.value_or(0) - 1),
                                 std::abs(h.spearman.value_or(0) - 1),
                                 std::abs(h.root_acc.value_or(0) - 1)});
  return {worst <= 1e-9 && elapsed < 10.0,
          fmt::format("DSpr={} UUAS={} NSpr={} root_acc={} max|1-x|={:.1e} in {:.2f}s",
                      d.spearman.value_or(-1), d.uuas.value_or(-1), h.spearman.value_or(-1),
                      h.root_acc.value_or(-1), worst, elapsed)};
}

// 2. Default-configured probes trained on 400 oracle trees recover structure
// on 100 held-out trees.
Outcome trained_recovery() {
  const auto start = std::chrono::steady_clock::now();
  sp::OracleConfig cfg;
  cfg.n_trees = 400;
  cfg.seed = 11;
  const sp::Dataset train = sp::make_oracle_dataset(cfg).dataset();
  cfg.n_trees = 100;
  cfg.seed = 12;
  cfg.id_prefix = "held-";
  const sp::Dataset test = sp::make_oracle_dataset(cfg).dataset();

  const sp::TrainConfig config;  // rank 128, batch 32, <= 40 epochs, patience 5
  const auto d = sp::train_probe(sp::Task::kDistance, train, test, config);
  const auto h = sp::train_probe(sp::Task::kDepth, train, test, config);
  const sp::EvalReport dr = sp::evaluate(d.probe, test);
  const sp::EvalReport hr = sp::evaluate(h.probe, test);
  const double elapsed = seconds_since(start);

  const double dspr = dr.spearman.value_or(0), uuas = dr.uuas.value_or(0);
  const double nspr = hr.spearman.value_or(0), root = hr.root_acc.value_or(0);
  return {dspr >= 0.95 && uuas >= 0.90 && nspr >= 0.95 && root >= 0.90 && elapsed < 300.0,
          fmt::format("DSpr={:.4f} UUAS={:.4f} ({} epochs) NSpr={:.4f} root_acc={:.4f} "
                      "({} epochs) in {:.1f}s",
                      dspr, uuas, d.probe.meta().epochs_run, nspr, root,
                      h.probe.meta().epochs_run, elapsed)};
}

// 3. Analytic gradient against central finite differences.
Outcome gradient_check() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal;
  double worst = 0;
  std::size_t instances = 0;
  for (sp::Task task : {sp::Task::kDistance, sp::Task::kDepth}) {
    for (int t = 0; t < 50; ++t) {
      const auto k = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
      const auto m = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
      const auto count = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
      const sp::Dataset data = sp::testing::random_dataset(rng, count, 2, 6, m);
      Eigen::MatrixXd b(k, static_cast<Eigen::Index>(m));
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = normal(rng);
      std::vector<std::size_t> batch(count);
      for (std::size_t s = 0; s < count; ++s) batch[s] = s;
      const Eigen::MatrixXd analytic = sp::loss_gradient(task, b, data, batch);
      const Eigen::MatrixXd numeric =
          sp::oracle::finite_difference_gradient(task, b, data, batch, 1e-5);
      const double scale = std::max({analytic.norm(), numeric.norm(), 1e-12});
      worst = std::max(worst, (analytic - numeric).norm() / scale);
      ++instances;
    }
  }
  return {worst <= 1e-4,
          fmt::format("{} instances (k,m,n <= 6), max relative error {:.2e}", instances, worst)};
}

// 4. BFS distances and depths against Floyd-Warshall.
Outcome label_oracle() {
  std::mt19937_64 rng(404);
  std::size_t mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const sp::DepTree tree = sp::random_tree(n, rng());
    const sp::IntMatrix fw = sp::oracle::floyd_warshall(tree);
    if (sp::tree_distances(tree) != fw) ++mismatches;
    if (sp::tree_depths(tree) != fw.row(static_cast<Eigen::Index>(tree.root())).transpose())
      ++mismatches;
  }
  return {mismatches == 0, fmt::format("200 trees (n <= 12), {} mismatches", mismatches)};
}

// 5. Prim's decode against exhaustive spanning-tree enumeration.
Outcome mst_decoder() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::size_t wrong_trees = 0;
  for (int t = 0; t < 100; ++t) {
    const auto n = std::uniform_int_distribution<Eigen::Index>(2, 6)(rng);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = uniform(rng);
    const auto mst = sp::minimum_spanning_tree(w);
    if (sp::oracle::EdgeSet(mst.begin(), mst.end()) != sp::oracle::exhaustive_mst(w).edges)
      ++wrong_trees;
  }
  std::size_t imperfect = 0;
  for (int t = 0; t < 200; ++t) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    const sp::TreeLabels gold = sp::make_labels(sp::random_tree(n, rng()));
    if (sp::uuas(gold.distances.cast<double>(), gold) != 1.0) ++imperfect;
  }
  return {wrong_trees == 0 && imperfect == 0,
          fmt::format("{}/100 matrices (n <= 6) differ from enumeration, "
                      "{}/200 gold trees with UUAS != 1",
                      wrong_trees, imperfect)};
}

// 6. Scene-tree construction against hand-traced fixtures and a brute-force
// nearest-phrase-ancestor search.
Outcome scene_tree_fidelity() {
  const auto fixtures = sp::testing::load_scene_fixtures();
  std::size_t fixture_failures = 0;
  for (const auto& f : fixtures) {
    const sp::SceneTree scene = sp::construct_scene_tree(f.tree, f.phrases, "img");
    if (scene.parent != f.parents || scene.depth != f.depths) ++fixture_failures;
  }
  std::size_t random_failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto inst = sp::testing::random_scene_instance(seed * 7919 + 1);
    const sp::SceneTree scene = sp::construct_scene_tree(inst.tree, inst.phrases, "img");
    const auto expected = sp::oracle::brute_force_scene(inst.tree, inst.phrases);
    if (scene.parent != expected.parents || scene.depth != expected.depths) ++random_failures;
  }
  return {fixtures.size() == 20 && fixture_failures == 0 && random_failures == 0,
          fmt::format("{}/{} fixtures wrong, {}/1000 random instances wrong", fixture_failures,
                      fixtures.size(), random_failures)};
}

// 7. DSpr barely moves across probe ranks once rank covers the tree dimension.
Outcome rank_insensitivity() {
  sp::OracleConfig cfg;
  cfg.n_trees = 400;
  cfg.min_n = 5;
  cfg.max_n = 33;  // tree embeddings use n - 1 <= 32 coordinates
  cfg.extra_dims = 0;
  cfg.seed = 21;
  const sp::Dataset train = sp::make_oracle_dataset(cfg).dataset();
  cfg.n_trees = 100;
  cfg.seed = 22;
  cfg.id_prefix = "held-";
  const sp::Dataset val = sp::make_oracle_dataset(cfg).dataset();

  const std::vector<std::size_t> ranks{32, 64, 128, 256};
  const auto rows = sp::sweep_ranks(ranks, sp::Task::kDistance, train, val, sp::TrainConfig{});
  double lo = 1, hi = -1;
  std::string values;
  for (const auto& row : rows) {
    const double v = row.report.spearman.value_or(-1);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    values += fmt::format(" r{}={:.4f}", row.rank, v);
  }
  return {hi - lo < 0.02, fmt::format("width {}; DSpr{}; spread {:.4f}", train.width(), values,
                                      hi - lo)};
}

double random_finite_double(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> bits;
  double v;
  do {
    v = std::bit_cast<double>(bits(rng));
  } while (!std::isfinite(v));
  return v;
}

float random_finite_float(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> bits;
  float v;
  do {
    v = std::bit_cast<float>(bits(rng));
  } while (!std::isfinite(v));
  return v;
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

std::string random_word(std::mt19937_64& rng) {
  static constexpr std::string_view kChars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.:/ \"\\";
  std::string s;
  const auto len = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  for (std::size_t i = 0; i < len; ++i)
    s += kChars[std::uniform_int_distribution<std::size_t>(0, kChars.size() - 1)(rng)];
  return s;
}

// 8. Every file format survives write-then-read with identical bits.
Outcome format_round_trips() {
  std::mt19937_64 rng(808);
  const fs::path dir = fs::temp_directory_path() / "structprobe_acceptance_io";
  fs::create_directories(dir);
  std::size_t emb_bad = 0, probe_bad = 0, labels_bad = 0, tsv_bad = 0;

  for (int c = 0; c < 1000; ++c) {
    // EMB-JSONL
    sp::EmbeddingSequence seq;
    seq.id = random_word(rng);
    seq.layer = std::uniform_int_distribution<int>(-2, 48)(rng);
    const auto n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const auto m = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    seq.values.resize(n, m);
    for (Eigen::Index i = 0; i < seq.values.size(); ++i) seq.values(i) = random_finite_float(rng);
    const std::vector<sp::EmbeddingSequence> seqs{seq};
    sp::write_embeddings(seqs, dir / "e.jsonl");
    const auto seqs_back = sp::read_embeddings(dir / "e.jsonl");
    if (seqs_back.size() != 1 || seqs_back[0].id != seq.id || seqs_back[0].layer != seq.layer ||
        !same_bits(seqs_back[0].values, seq.values) ||
        sp::format_embeddings_jsonl(seqs_back) != sp::testing::slurp((dir / "e.jsonl").string()))
      ++emb_bad;

    // Probe JSON
    Eigen::MatrixXd b(std::uniform_int_distribution<Eigen::Index>(1, 6)(rng),
                      std::uniform_int_distribution<Eigen::Index>(1, 6)(rng));
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = random_finite_double(rng);
    sp::ProbeMeta meta{random_word(rng), rng(), static_cast<std::size_t>(rng() % 41),
                       c % 4 ? std::optional<double>(random_finite_double(rng)) : std::nullopt};
    const sp::Probe probe(c % 2 ? sp::Task::kDepth : sp::Task::kDistance, b, meta);
    sp::write_probe(probe, dir / "p.json");
    const sp::Probe probe_back = sp::read_probe(dir / "p.json");
    if (probe_back.task() != probe.task() || !(probe_back.meta() == meta) ||
        !same_bits(probe_back.transform(), b) ||
        sp::probe_to_json(probe_back) != sp::probe_to_json(probe))
      ++probe_bad;

    // Labels JSONL
    const auto tn = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
    sp::TreeLabels labels = sp::make_labels(sp::random_tree(tn, rng(), random_word(rng)));
    if (c % 3 == 0) {
      for (std::size_t i = 0; i < tn; ++i) labels.deprels.push_back(random_word(rng));
    } else if (c % 3 == 1) {
      labels.root.reset();  // unrooted, as for visual labels
    }
    const std::vector<sp::TreeLabels> label_set{labels};
    sp::write_labels_jsonl(dir / "l.jsonl", label_set);
    const auto labels_back = sp::read_labels_jsonl(dir / "l.jsonl");
    if (labels_back != label_set || sp::format_labels_jsonl(labels_back) !=
                                        sp::testing::slurp((dir / "l.jsonl").string()))
      ++labels_bad;

    // Report TSV
    std::vector<sp::ReportRow> rows;
    const auto row_count = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
    for (std::size_t r = 0; r < row_count; ++r) {
      std::string layer = random_word(rng);
      rows.push_back({layer, static_cast<std::size_t>(rng() % 1024),
                      r % 2 ? sp::Task::kDepth : sp::Task::kDistance, random_word(rng),
                      rng() % 5 ? std::optional<double>(random_finite_double(rng)) : std::nullopt,
                      static_cast<std::size_t>(rng() % 100000)});
    }
    sp::write_report_tsv(rows, dir / "r.tsv");
    const auto rows_back = sp::read_report_tsv(dir / "r.tsv");
    bool rows_ok = rows_back.size() == rows.size();
    for (std::size_t r = 0; rows_ok && r < rows.size(); ++r) {
      rows_ok = rows_back[r] == rows[r];
      if (rows_ok && rows[r].value)
        rows_ok = std::bit_cast<std::uint64_t>(*rows_back[r].value) ==
                  std::bit_cast<std::uint64_t>(*rows[r].value);
    }
    if (!rows_ok ||
        sp::format_report_tsv(rows_back) != sp::testing::slurp((dir / "r.tsv").string()))
      ++tsv_bad;
  }
  fs::remove_all(dir);
  return {emb_bad + probe_bad + labels_bad + tsv_bad == 0,
          fmt::format("1000 cases each; failures: emb-jsonl {}, probe {}, labels {}, tsv {}",
                      emb_bad, probe_bad, labels_bad, tsv_bad)};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      fmt::format("{} {} >{} 2>&1", STRUCTPROBE_CLI, args, log.string());
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. Two grid runs with the same manifest and seed give identical files.
Outcome grid_determinism() {
  const fs::path dir = fs::temp_directory_path() / "structprobe_acceptance_grid";
  fs::remove_all(dir);
  fs::create_directories(dir);
  sp::OracleConfig cfg;
  cfg.n_trees = 120;
  cfg.max_n = 20;
  cfg.extra_dims = 4;
  cfg.seed = 91;
  const auto train = sp::make_oracle_dataset(cfg);
  cfg.n_trees = 30;
  cfg.seed = 92;
  cfg.id_prefix = "v-";
  const auto val = sp::make_oracle_dataset(cfg);
  cfg.noise_sigma = 0.5;
  cfg.seed = 91;
  cfg.n_trees = 120;
  cfg.id_prefix = "synth-";
  const auto noisy_train = sp::make_oracle_dataset(cfg);
  cfg.seed = 92;
  cfg.n_trees = 30;
  cfg.id_prefix = "v-";
  const auto noisy_val = sp::make_oracle_dataset(cfg);
  sp::write_labels_jsonl(dir / "train.labels.jsonl", train.labels);
  sp::write_labels_jsonl(dir / "val.labels.jsonl", val.labels);
  sp::write_embeddings(train.embeddings, dir / "l0.train.jsonl");
  sp::write_embeddings(val.embeddings, dir / "l0.val.jsonl");
  sp::write_embeddings(noisy_train.embeddings, dir / "l1.train.jsonl");
  sp::write_embeddings(noisy_val.embeddings, dir / "l1.val.jsonl");
  std::ofstream(dir / "manifest.json") << R"({
  "model": "oracle",
  "task": ["distance", "depth"],
  "labels": {"train": "train.labels.jsonl", "val": "val.labels.jsonl"},
  "layers": [{"layer": 0, "train": "l0.train.jsonl", "val": "l0.val.jsonl"},
             {"layer": 1, "train": "l1.train.jsonl", "val": "l1.val.jsonl"}],
  "baselines": [{"tag": "baseline", "train": "l1.train.jsonl", "val": "l1.val.jsonl"}],
  "ranks": [16, 32],
  "train": {"max_epochs": 6, "patience": 2}
}
)";

  const std::string manifest = (dir / "manifest.json").string();
  const int a = run_cli(fmt::format("--seed 5 --jobs 1 grid --manifest {} --out-dir {}", manifest,
                                    (dir / "run-a").string()),
                        dir / "a.log");
  const int b = run_cli(fmt::format("--seed 5 --jobs 4 grid --manifest {} --out-dir {}", manifest,
                                    (dir / "run-b").string()),
                        dir / "b.log");
  std::size_t compared = 0, differing = 0;
  for (const char* name : {"report.tsv", "dspr.svg", "uuas.svg", "nspr.svg", "root_acc.svg"}) {
    const fs::path pa = dir / "run-a" / name, pb = dir / "run-b" / name;
    if (!fs::exists(pa) || !fs::exists(pb)) {
      ++differing;
      continue;
    }
    ++compared;
    if (sp::testing::slurp(pa.string()) != sp::testing::slurp(pb.string())) ++differing;
  }
  fs::remove_all(dir);
  return {a == 0 && b == 0 && differing == 0 && compared == 5,
          fmt::format("exit codes {} and {}; {} files compared, {} differ", a, b, compared,
                      differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle exactness", oracle_exactness},
      {"trained-probe recovery", trained_recovery},
      {"gradient correctness", gradient_check},
      {"label-generation oracle equivalence", label_oracle},
      {"UUAS decoder correctness", mst_decoder},
      {"scene-tree construction fidelity", scene_tree_fidelity},
      {"rank insensitivity", rank_insensitivity},
      {"format round-trips", format_round_trips},
      {"grid determinism", grid_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::cout << fmt::format("{} criterion {}: {}: {}", outcome.pass ? "PASS" : "FAIL", i + 1,
                             criteria[i].first, outcome.detail)
              << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failed, criteria.size())
            << std::endl;
  return failed == 0 ? 0 : 1;
}
