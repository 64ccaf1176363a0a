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

#ifndef STRUCTPROBE_EXPERIMENT_HPP
#define STRUCTPROBE_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "structprobe/probe.hpp"
#include "structprobe/report.hpp"
#include "structprobe/train.hpp"

namespace structprobe {

struct SplitPaths {
  std::filesystem::path train;
  std::filesystem::path val;
  std::optional<std::filesystem::path> test;  // evaluation falls back to val
};

// Embedding files for one row of the grid. `tag` is the layer number for
// model layers and a name such as "baseline" or "rcnn-baseline" otherwise.
struct EmbeddingSource {
  std::string tag;
  SplitPaths paths;
};

/// One experiment grid, loaded from a single JSON file:
///
///   {"model": "bert",
///    "task": "distance" | ["distance", "depth"],
///    "labels": {"train": p, "val": p, "test": p},
///    "layers": [{"layer": 0, "train": p, "val": p, "test": p}, ...],
///    "baselines": [{"tag": "baseline", "train": p, ...}],
///    "ranks": [128],
///    "train": {"batch_size": 32, "max_epochs": 40, "patience": 5,
///              "step_rule": "adam", "learning_rate": 0.001, "seed": 0},
///    "eval": {"spearman": "row" | "matrix", "exclude_deprels": ["punct"],
///             "min_length": 5, "max_length": 50},
///    "output_dir": "out"}
///
/// Relative paths resolve against the manifest's directory. "test" entries
/// are optional.
struct ExperimentManifest {
  std::string model = "probe";
  std::vector<Task> tasks;
  SplitPaths labels;
  std::vector<EmbeddingSource> layers;
  std::vector<EmbeddingSource> baselines;
  std::vector<std::size_t> ranks{128};
  TrainConfig train;
  EvalOptions eval;
  std::filesystem::path output_dir = "structprobe-out";
};

// Parses and checks the manifest shape. Throws ParseError for malformed
// JSON and ValidationError for an empty layer list, empty rank list,
// non-integer layer numbers, integer baseline tags, or a bad train config.
ExperimentManifest parse_manifest(std::string_view json,
                                  const std::filesystem::path& base_dir = {});
ExperimentManifest load_manifest(const std::filesystem::path& path);

struct GridOptions {
  std::size_t jobs = 1;
  bool quiet = true;
};

struct CellFailure {
  Task task = Task::kDistance;
  std::string layer;
  std::size_t rank = 0;
  std::string message;
};

struct GridResult {
  std::vector<EvalReport> reports;
  std::vector<CellFailure> failures;
  std::vector<std::filesystem::path> charts;
};

/// Trains and evaluates one probe per (task, layer or baseline, rank).
///
/// Every referenced file is loaded and every (labels, embeddings) pair is
/// validated before any training starts; a problem there throws. A cell
/// whose training fails is recorded in `failures` and skipped. Cells run on
/// up to `jobs` worker threads; results are collected in grid order, so
/// outputs do not depend on the number of workers.
///
/// Writes to the output directory:
///   report.tsv                         aggregate table
///   <metric>.svg                       one chart per reported metric
///   cells/<task>-<tag>-r<rank>.json    per-sequence report
///   probes/<task>-<tag>-r<rank>.json   trained probe
GridResult run_layer_grid(const ExperimentManifest& manifest,
                          const GridOptions& options = {});

}  // namespace structprobe

#endif  // STRUCTPROBE_EXPERIMENT_HPP
