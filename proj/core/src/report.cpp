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

#include "structprobe/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/core.h>

#include "jsonl.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

using detail::Json;

namespace {

constexpr std::string_view kHeader = "layer\trank\ttask\tmetric\tvalue\tn_sequences";

std::vector<bool> keep_mask(const TreeLabels& labels, const EvalOptions& options) {
  if (options.exclude_deprels.empty() || labels.deprels.empty()) return {};
  std::vector<bool> keep(labels.size(), true);
  for (std::size_t i = 0; i < labels.deprels.size(); ++i)
    if (std::find(options.exclude_deprels.begin(), options.exclude_deprels.end(),
                  labels.deprels[i]) != options.exclude_deprels.end())
      keep[i] = false;
  return keep;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(fmt::format("bad {} '{}'", what, s), line_no);
  return value;
}

}  // namespace

EvalReport evaluate_predictions(Task task, const Dataset& data,
                                std::span<const Eigen::MatrixXd> distances,
                                std::span<const Eigen::VectorXd> depths,
                                const EvalOptions& options) {
  const std::size_t count = data.size();
  if (task == Task::kDistance ? distances.size() != count : depths.size() != count)
    throw ValidationError("prediction count differs from dataset size");

  EvalReport report;
  report.task = task;
  std::vector<std::optional<double>> scores;
  std::vector<std::size_t> lengths;
  std::size_t edges_correct = 0, edges_total = 0;
  std::size_t roots_correct = 0;
  bool all_rooted = count > 0;

  for (std::size_t s = 0; s < count; ++s) {
    const TreeLabels& gold = data.labels[s];
    SequenceScore score;
    score.id = gold.id;
    score.length = gold.size();
    if (task == Task::kDistance) {
      score.spearman = distance_spearman(distances[s], gold.distances,
                                         options.spearman_mode);
      const AttachmentCount attach =
          attachment_count(distances[s], gold, keep_mask(gold, options));
      score.edges_correct = attach.correct;
      score.edges_total = attach.total;
      edges_correct += attach.correct;
      edges_total += attach.total;
    } else {
      score.spearman = depth_spearman(depths[s], gold.depths);
      if (gold.root) {
        score.root_correct = predicted_root(depths[s]) == *gold.root;
        if (*score.root_correct) ++roots_correct;
      } else {
        all_rooted = false;
      }
    }
    scores.push_back(score.spearman);
    lengths.push_back(score.length);
    if (!score.spearman) ++report.absent_spearman;
    if (score.spearman && score.length >= options.lengths.min &&
        score.length <= options.lengths.max)
      ++report.spearman_sequences;
    report.sequences.push_back(std::move(score));
  }

  report.spearman = length_binned_spearman(scores, lengths, options.lengths);
  if (task == Task::kDistance) {
    if (edges_total > 0)
      report.uuas = static_cast<double>(edges_correct) / static_cast<double>(edges_total);
  } else if (all_rooted) {
    report.root_acc = static_cast<double>(roots_correct) / static_cast<double>(count);
  }
  return report;
}

EvalReport evaluate(const Probe& probe, const Dataset& data,
                    const EvalOptions& options, std::string layer) {
  std::vector<Eigen::MatrixXd> distances;
  std::vector<Eigen::VectorXd> depths;
  for (const auto& seq : data.embeddings) {
    if (probe.task() == Task::kDistance)
      distances.push_back(predict_distances(probe, seq));
    else
      depths.push_back(predict_depths(probe, seq));
  }
  EvalReport report = evaluate_predictions(probe.task(), data, distances, depths, options);
  report.layer = std::move(layer);
  report.rank = probe.rank();
  return report;
}

std::vector<ReportRow> report_rows(const EvalReport& report) {
  std::vector<ReportRow> rows;
  const std::size_t total = report.sequences.size();
  auto add = [&](std::string metric, std::optional<double> value, std::size_t n) {
    rows.push_back(ReportRow{report.layer, report.rank, report.task,
                             std::move(metric), value, n});
  };
  if (report.task == Task::kDistance) {
    add("dspr", report.spearman, report.spearman_sequences);
    add("uuas", report.uuas, total);
  } else {
    add("nspr", report.spearman, report.spearman_sequences);
    if (report.root_acc) add("root_acc", report.root_acc, total);
  }
  return rows;
}

std::string format_report_tsv(std::span<const ReportRow> rows) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& row : rows) {
    if (row.layer.find_first_of("\t\n") != std::string::npos ||
        row.metric.find_first_of("\t\n") != std::string::npos)
      throw ValidationError("report fields must not contain tabs or newlines");
    const std::string value = row.value ? fmt::format("{}", *row.value) : "NA";
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", row.layer, row.rank,
                       to_string(row.task), row.metric, value, row.n_sequences);
  }
  return out;
}

std::vector<ReportRow> parse_report_tsv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) throw ParseError("unexpected report header", line_no);
      header_seen = true;
      continue;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 6)
      throw ParseError(fmt::format("expected 6 columns, found {}", cols.size()), line_no);
    ReportRow row;
    row.layer = std::string(cols[0]);
    row.rank = parse_number<std::size_t>(cols[1], line_no, "rank");
    try {
      row.task = parse_task(cols[2]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    row.metric = std::string(cols[3]);
    if (cols[4] != "NA") row.value = parse_number<double>(cols[4], line_no, "value");
    row.n_sequences = parse_number<std::size_t>(cols[5], line_no, "n_sequences");
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError("empty report");
  return rows;
}

void write_report_tsv(std::span<const ReportRow> rows,
                      const std::filesystem::path& path) {
  write_file_atomic(path, format_report_tsv(rows));
}

std::vector<ReportRow> read_report_tsv(const std::filesystem::path& path) {
  return parse_report_tsv(read_text_file(path));
}

std::string report_to_json(const EvalReport& report) {
  auto opt = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  Json out;
  out["layer"] = report.layer;
  out["rank"] = report.rank;
  out["task"] = to_string(report.task);
  Json aggregates;
  aggregates[report.task == Task::kDistance ? "dspr" : "nspr"] = opt(report.spearman);
  if (report.task == Task::kDistance)
    aggregates["uuas"] = opt(report.uuas);
  else
    aggregates["root_acc"] = opt(report.root_acc);
  aggregates["spearman_sequences"] = report.spearman_sequences;
  aggregates["absent_spearman"] = report.absent_spearman;
  out["aggregates"] = std::move(aggregates);

  Json sequences = Json::array();
  for (const auto& s : report.sequences) {
    Json rec;
    rec["id"] = s.id;
    rec["length"] = s.length;
    rec["spearman"] = opt(s.spearman);
    if (report.task == Task::kDistance) {
      rec["edges_correct"] = s.edges_correct;
      rec["edges_total"] = s.edges_total;
    } else if (s.root_correct) {
      rec["root_correct"] = *s.root_correct;
    }
    sequences.push_back(std::move(rec));
  }
  out["sequences"] = std::move(sequences);
  return out.dump(2);
}

}  // namespace structprobe
