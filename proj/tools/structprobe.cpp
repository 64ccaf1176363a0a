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

// structprobe: gold tree labels, scene trees, synthetic oracle data, probe
// training and evaluation from the command line.
//
// Exit codes: 0 success, 1 usage or validation error, 2 data error,
// 3 training divergence.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "structprobe/chart.hpp"
#include "structprobe/conll.hpp"
#include "structprobe/dataset.hpp"
#include "structprobe/embeddings.hpp"
#include "structprobe/error.hpp"
#include "structprobe/experiment.hpp"
#include "structprobe/file_util.hpp"
#include "structprobe/grounding.hpp"
#include "structprobe/labels_io.hpp"
#include "structprobe/probe.hpp"
#include "structprobe/report.hpp"
#include "structprobe/synth.hpp"
#include "structprobe/train.hpp"

namespace sp = structprobe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDiverged = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t jobs = 1;
  bool quiet = false;
};

void note(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << '\n';
}

sp::Dataset load_dataset(const std::string& labels, const std::string& emb) {
  return sp::make_dataset(sp::read_labels_jsonl(labels), sp::read_embeddings(emb));
}

sp::SpearmanMode parse_mode(const std::string& mode) {
  if (mode == "row") return sp::SpearmanMode::kRowWise;
  if (mode == "matrix") return sp::SpearmanMode::kWholeMatrix;
  throw sp::ValidationError("unknown spearman mode '" + mode + "'");
}

std::vector<std::size_t> parse_ranks(const std::string& text) {
  std::vector<std::size_t> ranks;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    if (!item.empty()) {
      std::size_t used = 0;
      unsigned long value = 0;
      try {
        value = std::stoul(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || value == 0)
        throw sp::ValidationError("bad rank '" + item + "'");
      ranks.push_back(value);
    }
    start = comma + 1;
  }
  return ranks;
}

struct TrainArgs {
  std::string task = "distance";
  std::string labels, emb, val_labels, val_emb;
  std::string layer;
  std::string step_rule = "adam";
  sp::TrainConfig cfg;

  void add_to(CLI::App* cmd, bool with_rank) {
    cmd->add_option("--task", task, "distance or depth")
        ->check(CLI::IsMember({"distance", "depth"}));
    cmd->add_option("--labels", labels, "training labels (JSONL)")->required();
    cmd->add_option("--emb", emb, "training embeddings (EMB-JSONL)")->required();
    cmd->add_option("--val-labels", val_labels, "validation labels")->required();
    cmd->add_option("--val-emb", val_emb, "validation embeddings")->required();
    if (with_rank) cmd->add_option("--rank", cfg.rank, "probe rank k")->capture_default_str();
    cmd->add_option("--batch", cfg.batch_size, "batch size")->capture_default_str();
    cmd->add_option("--epochs", cfg.max_epochs, "maximum epochs")->capture_default_str();
    cmd->add_option("--patience", cfg.patience, "early-stopping patience")
        ->capture_default_str();
    cmd->add_option("--lr", cfg.learning_rate, "learning rate")->capture_default_str();
    cmd->add_option("--step-rule", step_rule, "adam or sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
    cmd->add_option("--layer", layer, "layer tag recorded in outputs");
  }

  sp::TrainConfig config(const Globals& g) const {
    sp::TrainConfig out = cfg;
    out.step_rule = sp::parse_step_rule(step_rule);
    out.seed = g.seed;
    return out;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural probes for dependency and scene trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--jobs", g.jobs, "worker threads for grid runs")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "suppress progress messages");

  // build-labels
  std::string conll_path, out_path;
  auto* build = app.add_subcommand("build-labels", "gold distance/depth labels from CoNLL");
  build->add_option("--conll", conll_path, "CoNLL / CoNLL-U file")->required();
  build->add_option("--out", out_path, "labels JSONL output")->required();

  // scene-tree
  std::string grounding_path;
  auto* scene = app.add_subcommand("scene-tree", "scene trees and visual labels");
  scene->add_option("--conll", conll_path, "caption dependency trees")->required();
  scene->add_option("--grounding", grounding_path, "phrase grounding JSONL")->required();
  scene->add_option("--out", out_path, "scene-tree JSONL output")->required();

  // synth
  sp::OracleConfig oracle;
  std::string out_labels, out_emb;
  auto* synth = app.add_subcommand("synth", "synthetic trees with exact tree embeddings");
  synth->add_option("--n-trees", oracle.n_trees)->capture_default_str();
  synth->add_option("--min-n", oracle.min_n)->capture_default_str();
  synth->add_option("--max-n", oracle.max_n)->capture_default_str();
  synth->add_option("--extra-dims", oracle.extra_dims)->capture_default_str();
  synth->add_option("--noise", oracle.noise_sigma)->capture_default_str();
  synth->add_option("--id-prefix", oracle.id_prefix)->capture_default_str();
  synth->add_option("--out-labels", out_labels)->required();
  synth->add_option("--out-emb", out_emb)->required();

  // train
  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train one probe");
  train_args.add_to(train, true);
  train->add_option("--out", out_path, "probe JSON output")->required();

  // sweep
  TrainArgs sweep_args;
  std::string ranks_text = "32,64,128,256";
  auto* sweep = app.add_subcommand("sweep", "train one probe per rank");
  sweep_args.add_to(sweep, false);
  sweep->add_option("--ranks", ranks_text, "comma-separated ranks")->capture_default_str();
  sweep->add_option("--out", out_path, "report TSV output")->required();

  // eval
  std::string probe_path, labels_path, emb_path, json_path, mode = "row", layer_tag;
  std::vector<std::string> exclude;
  auto* eval = app.add_subcommand("eval", "evaluate a trained probe");
  eval->add_option("--probe", probe_path)->required();
  eval->add_option("--labels", labels_path)->required();
  eval->add_option("--emb", emb_path)->required();
  eval->add_option("--out", out_path, "report TSV output")->required();
  eval->add_option("--json", json_path, "per-sequence JSON report");
  eval->add_option("--exclude-deprels", exclude, "relations left out of UUAS")
      ->delimiter(',');
  eval->add_option("--spearman", mode, "row or matrix")
      ->check(CLI::IsMember({"row", "matrix"}));
  eval->add_option("--layer", layer_tag, "layer tag (defaults to the probe's)");

  // grid
  std::string manifest_path, out_dir;
  auto* grid = app.add_subcommand("grid", "run an experiment manifest");
  grid->add_option("--manifest", manifest_path)->required();
  grid->add_option("--out-dir", out_dir, "overrides the manifest output directory");

  // chart
  std::string report_path, metric, model = "probe", title;
  auto* chart = app.add_subcommand("chart", "SVG chart from a report TSV");
  chart->add_option("--report", report_path)->required();
  chart->add_option("--metric", metric, "dspr, nspr, uuas or root_acc")->required();
  chart->add_option("--out", out_path)->required();
  chart->add_option("--model", model, "series name for numbered layers")
      ->capture_default_str();
  chart->add_option("--title", title);

  // align
  std::string align_path;
  auto* align = app.add_subcommand("align", "average wordpiece embeddings per word");
  align->add_option("--emb", emb_path)->required();
  align->add_option("--align", align_path, "alignment JSONL")->required();
  align->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  g.seed_given = app.count("--seed") > 0;

  try {
    if (*build) {
      const auto trees = sp::read_conllu_file(conll_path);
      std::vector<sp::TreeLabels> labels;
      labels.reserve(trees.size());
      for (const auto& t : trees) labels.push_back(sp::make_labels(t));
      sp::write_labels_jsonl(out_path, labels);
      note(g, fmt::format("wrote {} label records to {}", labels.size(), out_path));
    } else if (*scene) {
      const auto trees = sp::read_conllu_file(conll_path);
      const auto captions = sp::read_grounding_jsonl(grounding_path);
      const auto records = sp::build_scene_records(trees, captions);
      std::string out;
      for (const auto& r : records) {
        for (const auto& [a, b] : r.overlaps)
          note(g, fmt::format("warning: sentence '{}': phrases '{}' and '{}' overlap",
                              r.labels.id, a, b));
        out += sp::scene_record_to_json(r);
        out += '\n';
      }
      sp::write_file_atomic(out_path, out);
      note(g, fmt::format("wrote {} scene trees to {}", records.size(), out_path));
    } else if (*synth) {
      oracle.seed = g.seed_given ? g.seed : oracle.seed;
      const auto data = sp::make_oracle_dataset(oracle);
      sp::write_labels_jsonl(out_labels, data.labels);
      sp::write_embeddings(data.embeddings, out_emb);
      note(g, fmt::format("wrote {} oracle trees (width {})", data.labels.size(),
                          data.embeddings.empty() ? 0 : data.embeddings.front().width()));
    } else if (*train) {
      const auto train_set = load_dataset(train_args.labels, train_args.emb);
      const auto val_set = load_dataset(train_args.val_labels, train_args.val_emb);
      auto result = sp::train_probe(sp::parse_task(train_args.task), train_set, val_set,
                                    train_args.config(g), train_args.layer);
      sp::write_probe(result.probe, out_path);
      note(g, fmt::format("trained {} epochs, best validation loss {:.6f} at epoch {}",
                          result.probe.meta().epochs_run,
                          result.probe.meta().best_val_loss.value_or(0.0),
                          result.history.best_epoch));
    } else if (*sweep) {
      const auto train_set = load_dataset(sweep_args.labels, sweep_args.emb);
      const auto val_set = load_dataset(sweep_args.val_labels, sweep_args.val_emb);
      const auto ranks = parse_ranks(ranks_text);
      const auto rows = sp::sweep_ranks(ranks, sp::parse_task(sweep_args.task), train_set,
                                        val_set, sweep_args.config(g), {}, sweep_args.layer);
      std::vector<sp::ReportRow> table;
      for (const auto& row : rows)
        for (auto& r : sp::report_rows(row.report)) table.push_back(std::move(r));
      sp::write_report_tsv(table, out_path);
      note(g, fmt::format("swept {} ranks", rows.size()));
    } else if (*eval) {
      const auto probe = sp::read_probe(probe_path);
      const auto data = load_dataset(labels_path, emb_path);
      sp::EvalOptions options;
      options.spearman_mode = parse_mode(mode);
      options.exclude_deprels = exclude;
      const auto report = sp::evaluate(probe, data, options,
                                       layer_tag.empty() ? probe.meta().layer : layer_tag);
      const auto rows = sp::report_rows(report);
      sp::write_report_tsv(rows, out_path);
      if (!json_path.empty()) sp::write_file_atomic(json_path, sp::report_to_json(report) + "\n");
      if (!g.quiet) std::cout << sp::format_report_tsv(rows);
    } else if (*grid) {
      auto manifest = sp::load_manifest(manifest_path);
      if (const char* env = std::getenv("STRUCTPROBE_OUTPUT_DIR"); env && *env)
        manifest.output_dir = env;
      if (!out_dir.empty()) manifest.output_dir = out_dir;
      if (g.seed_given) manifest.train.seed = g.seed;
      const auto result = sp::run_layer_grid(manifest, {g.jobs, g.quiet});
      for (const auto& f : result.failures)
        std::cerr << fmt::format("cell {}-{}-r{} failed: {}\n", sp::to_string(f.task),
                                 f.layer, f.rank, f.message);
      if (result.reports.empty() && !result.failures.empty()) return kExitDiverged;
      note(g, fmt::format("{} cells done, report in {}", result.reports.size(),
                          (manifest.output_dir / "report.tsv").string()));
    } else if (*chart) {
      sp::ChartOptions options;
      options.model = model;
      options.title = title;
      sp::emit_chart(sp::read_report_tsv(report_path), metric, out_path, options);
    } else if (*align) {
      const auto maps = sp::read_alignments(align_path);
      std::unordered_map<std::string, const sp::AlignmentMap*> by_id;
      for (const auto& m : maps) by_id.emplace(m.id, &m);
      std::vector<sp::EmbeddingSequence> out;
      sp::EmbeddingReader reader(emb_path);
      while (auto seq = reader.next()) {
        const auto it = by_id.find(seq->id);
        if (it == by_id.end())
          throw sp::ValidationError("no alignment for sequence '" + seq->id + "'");
        out.push_back(sp::align_wordpieces(*seq, *it->second));
      }
      sp::write_embeddings(out, out_path);
    }
  } catch (const sp::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const sp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
