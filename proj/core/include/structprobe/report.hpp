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

#ifndef STRUCTPROBE_REPORT_HPP
#define STRUCTPROBE_REPORT_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "structprobe/dataset.hpp"
#include "structprobe/metrics.hpp"
#include "structprobe/probe.hpp"

namespace structprobe {

struct EvalOptions {
  SpearmanMode spearman_mode = SpearmanMode::kRowWise;
  LengthRange lengths;
  // Nodes whose relation label is listed here are left out of UUAS.
  std::vector<std::string> exclude_deprels;
};

struct SequenceScore {
  std::string id;
  std::size_t length = 0;
  std::optional<double> spearman;
  // Distance task only.
  std::size_t edges_correct = 0;
  std::size_t edges_total = 0;
  // Depth task on rooted labels only.
  std::optional<bool> root_correct;
};

/// Metrics of one probe on one dataset.
///
/// For the distance task `spearman` is DSpr and `uuas` is set; for the
/// depth task `spearman` is NSpr and `root_acc` is set when every sequence
/// has a root. UUAS is pooled over sequences (total recovered gold edges
/// divided by total gold edges).
struct EvalReport {
  std::string layer;
  std::size_t rank = 0;
  Task task = Task::kDistance;
  std::vector<SequenceScore> sequences;
  std::optional<double> spearman;
  std::optional<double> uuas;
  std::optional<double> root_acc;
  std::size_t spearman_sequences = 0;
  std::size_t absent_spearman = 0;
};

// Scores precomputed predictions; `distances` is used for the distance
// task and `depths` for the depth task.
EvalReport evaluate_predictions(Task task, const Dataset& data,
                                std::span<const Eigen::MatrixXd> distances,
                                std::span<const Eigen::VectorXd> depths,
                                const EvalOptions& options = {});

EvalReport evaluate(const Probe& probe, const Dataset& data,
                    const EvalOptions& options = {}, std::string layer = {});

/// One line of the aggregate TSV report.
struct ReportRow {
  std::string layer;
  std::size_t rank = 0;
  Task task = Task::kDistance;
  std::string metric;
  std::optional<double> value;  // written as NA when absent
  std::size_t n_sequences = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// Metric names: "dspr" and "uuas" for distance, "nspr" and "root_acc" for
// depth (root_acc only when it applies).
std::vector<ReportRow> report_rows(const EvalReport& report);

// Header `layer\trank\ttask\tmetric\tvalue\tn_sequences`, then one row per
// line. Values use the shortest representation that reads back exactly.
std::string format_report_tsv(std::span<const ReportRow> rows);
std::vector<ReportRow> parse_report_tsv(std::string_view text);
void write_report_tsv(std::span<const ReportRow> rows,
                      const std::filesystem::path& path);
std::vector<ReportRow> read_report_tsv(const std::filesystem::path& path);

// Aggregates plus per-sequence detail.
std::string report_to_json(const EvalReport& report);

}  // namespace structprobe

#endif  // STRUCTPROBE_REPORT_HPP
