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

#include "structprobe/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <iostream>
#include <mutex>
#include <thread>

#include <fmt/core.h>

#include "jsonl.hpp"
#include "structprobe/chart.hpp"
#include "structprobe/dataset.hpp"
#include "structprobe/embeddings.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"
#include "structprobe/labels_io.hpp"

namespace structprobe {

using detail::field;
using detail::Json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

SplitPaths split_paths(const Json& j, const std::filesystem::path& base) {
  SplitPaths out;
  out.train = resolve(base, field(j, "train").get<std::string>());
  out.val = resolve(base, field(j, "val").get<std::string>());
  if (const auto it = j.find("test"); it != j.end() && !it->is_null())
    out.test = resolve(base, it->get<std::string>());
  return out;
}

bool is_integer_tag(std::string_view tag) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(tag.data(), tag.data() + tag.size(), value);
  return !tag.empty() && ec == std::errc{} && ptr == tag.data() + tag.size();
}

struct SourceData {
  std::string tag;
  Dataset train;
  Dataset val;
  Dataset eval;
};

struct Cell {
  Task task;
  std::size_t source;
  std::size_t rank;
};

std::string cell_name(const Cell& cell, const std::string& tag) {
  return fmt::format("{}-{}-r{}", to_string(cell.task), tag, cell.rank);
}

}  // namespace

ExperimentManifest parse_manifest(std::string_view json,
                                  const std::filesystem::path& base_dir) {
  ExperimentManifest m;
  try {
    const Json j = Json::parse(json);
    if (!j.is_object()) throw ParseError("manifest must be a JSON object");
    m.model = j.value("model", m.model);

    const Json& task = field(j, "task");
    if (task.is_array()) {
      for (const auto& t : task) m.tasks.push_back(parse_task(t.get<std::string>()));
    } else {
      m.tasks.push_back(parse_task(task.get<std::string>()));
    }
    if (m.tasks.empty()) throw ValidationError("manifest lists no task");

    m.labels = split_paths(field(j, "labels"), base_dir);

    const Json& layers = field(j, "layers");
    if (!layers.is_array() || layers.empty())
      throw ValidationError("manifest must list at least one layer");
    for (const auto& l : layers) {
      const Json& number = field(l, "layer");
      if (!number.is_number_integer())
        throw ValidationError("layer numbers must be integers");
      m.layers.push_back({std::to_string(number.get<long>()), split_paths(l, base_dir)});
    }
    if (const auto it = j.find("baselines"); it != j.end()) {
      for (const auto& b : *it) {
        std::string tag = field(b, "tag").get<std::string>();
        if (tag.empty() || is_integer_tag(tag))
          throw ValidationError(fmt::format("baseline tag '{}' must be a non-numeric name", tag));
        m.baselines.push_back({std::move(tag), split_paths(b, base_dir)});
      }
    }
    std::vector<std::string> tags;
    for (const auto& s : m.layers) tags.push_back(s.tag);
    for (const auto& s : m.baselines) tags.push_back(s.tag);
    std::sort(tags.begin(), tags.end());
    if (std::adjacent_find(tags.begin(), tags.end()) != tags.end())
      throw ValidationError("layer and baseline tags must be unique");

    if (const auto it = j.find("ranks"); it != j.end())
      m.ranks = it->get<std::vector<std::size_t>>();
    if (m.ranks.empty()) throw ValidationError("manifest must list at least one rank");

    if (const auto it = j.find("train"); it != j.end()) {
      const Json& t = *it;
      m.train.batch_size = t.value("batch_size", m.train.batch_size);
      m.train.max_epochs = t.value("max_epochs", m.train.max_epochs);
      m.train.patience = t.value("patience", m.train.patience);
      m.train.learning_rate = t.value("learning_rate", m.train.learning_rate);
      m.train.seed = t.value("seed", m.train.seed);
      if (const auto rule = t.find("step_rule"); rule != t.end())
        m.train.step_rule = parse_step_rule(rule->get<std::string>());
    }
    for (std::size_t rank : m.ranks) {
      TrainConfig check = m.train;
      check.rank = rank;
      validate(check);
    }

    if (const auto it = j.find("eval"); it != j.end()) {
      const Json& e = *it;
      const std::string mode = e.value("spearman", std::string("row"));
      if (mode == "row")
        m.eval.spearman_mode = SpearmanMode::kRowWise;
      else if (mode == "matrix")
        m.eval.spearman_mode = SpearmanMode::kWholeMatrix;
      else
        throw ValidationError(fmt::format("unknown spearman mode '{}'", mode));
      m.eval.exclude_deprels =
          e.value("exclude_deprels", std::vector<std::string>{});
      m.eval.lengths.min = e.value("min_length", m.eval.lengths.min);
      m.eval.lengths.max = e.value("max_length", m.eval.lengths.max);
    }
    m.output_dir = resolve(base_dir, j.value("output_dir", m.output_dir.string()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("bad manifest: {}", e.what()));
  }
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

GridResult run_layer_grid(const ExperimentManifest& manifest,
                          const GridOptions& options) {
  std::mutex log_mutex;
  auto log = [&](const std::string& line) {
    if (options.quiet) return;
    std::lock_guard lock(log_mutex);
    std::cerr << line << '\n';
  };

  // Load and validate everything before training anything.
  const auto train_labels = read_labels_jsonl(manifest.labels.train);
  const auto val_labels = read_labels_jsonl(manifest.labels.val);
  const auto eval_labels =
      manifest.labels.test ? read_labels_jsonl(*manifest.labels.test) : val_labels;

  std::vector<SourceData> sources;
  auto load_source = [&](const EmbeddingSource& src) {
    auto pair = [&](const std::vector<TreeLabels>& labels,
                    const std::filesystem::path& emb) {
      try {
        return make_dataset(labels, read_embeddings(emb));
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{} ({}): {}", src.tag, emb.string(), e.what()));
      }
    };
    SourceData data;
    data.tag = src.tag;
    data.train = pair(train_labels, src.paths.train);
    data.val = pair(val_labels, src.paths.val);
    const bool has_test = manifest.labels.test && src.paths.test;
    if (manifest.labels.test.has_value() != src.paths.test.has_value())
      throw ValidationError(fmt::format(
          "{}: test embeddings and test labels must be given together", src.tag));
    data.eval = has_test ? pair(eval_labels, *src.paths.test) : data.val;
    if (data.train.width() != data.val.width() || data.train.width() != data.eval.width())
      throw ValidationError(fmt::format("{}: splits have different widths", src.tag));
    sources.push_back(std::move(data));
  };
  for (const auto& src : manifest.layers) load_source(src);
  for (const auto& src : manifest.baselines) load_source(src);

  std::vector<Cell> cells;
  for (Task task : manifest.tasks)
    for (std::size_t s = 0; s < sources.size(); ++s)
      for (std::size_t rank : manifest.ranks) cells.push_back({task, s, rank});

  std::vector<std::optional<EvalReport>> reports(cells.size());
  std::vector<std::optional<CellFailure>> failures(cells.size());
  std::vector<std::optional<Probe>> probes(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell& cell = cells[c];
      const SourceData& data = sources[cell.source];
      const std::string name = cell_name(cell, data.tag);
      try {
        TrainConfig cfg = manifest.train;
        cfg.rank = cell.rank;
        TrainResult result = train_probe(cell.task, data.train, data.val, cfg, data.tag);
        reports[c] = evaluate(result.probe, data.eval, manifest.eval, data.tag);
        probes[c] = std::move(result.probe);
        log(fmt::format("[{}] done after {} epochs", name, probes[c]->meta().epochs_run));
      } catch (const std::exception& e) {
        failures[c] = CellFailure{cell.task, data.tag, cell.rank, e.what()};
        log(fmt::format("[{}] failed: {}", name, e.what()));
      }
    }
  };
  const std::size_t width = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(cells.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < width; ++i) pool.emplace_back(worker);
    worker();
  }

  GridResult result;
  std::vector<ReportRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::string name = cell_name(cells[c], sources[cells[c].source].tag);
    if (failures[c]) {
      result.failures.push_back(std::move(*failures[c]));
      continue;
    }
    write_file_atomic(manifest.output_dir / "cells" / (name + ".json"),
                      report_to_json(*reports[c]) + "\n");
    write_probe(*probes[c], manifest.output_dir / "probes" / (name + ".json"));
    for (auto& row : report_rows(*reports[c])) rows.push_back(std::move(row));
    result.reports.push_back(std::move(*reports[c]));
  }
  write_report_tsv(rows, manifest.output_dir / "report.tsv");

  ChartOptions chart;
  chart.model = manifest.model;
  for (std::string_view metric : {"dspr", "uuas", "nspr", "root_acc"}) {
    const bool present = std::any_of(rows.begin(), rows.end(), [&](const ReportRow& r) {
      return r.metric == metric && r.value.has_value();
    });
    if (!present) continue;
    const auto path = manifest.output_dir / (std::string(metric) + ".svg");
    emit_chart(rows, metric, path, chart);
    result.charts.push_back(path);
  }
  return result;
}

}  // namespace structprobe
