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

#include "structprobe/labels_io.hpp"

#include <fmt/core.h>

#include "jsonl.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

using detail::field;
using detail::Json;

std::string labels_to_json(const TreeLabels& labels) {
  const auto n = labels.depths.size();
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(labels.distances(i, j));
    rows.push_back(std::move(row));
  }
  Json depths = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) depths.push_back(labels.depths(i));

  Json record;
  record["id"] = labels.id;
  record["n"] = n;
  record["depths"] = std::move(depths);
  record["distances"] = std::move(rows);
  if (labels.root) record["root"] = *labels.root;
  if (!labels.deprels.empty()) record["deprels"] = labels.deprels;
  return record.dump();
}

namespace {

TreeLabels labels_from_record(const Json& record) {
  TreeLabels labels;
  labels.id = field(record, "id").get<std::string>();
  const auto n = field(record, "n").get<std::int64_t>();
  if (n < 1) throw ValidationError(fmt::format("'{}': n must be >= 1", labels.id));
  const auto& depths = field(record, "depths");
  const auto& rows = field(record, "distances");
  if (depths.size() != static_cast<std::size_t>(n) ||
      rows.size() != static_cast<std::size_t>(n))
    throw ValidationError(
        fmt::format("'{}': depths/distances do not match n={}", labels.id, n));
  labels.depths.resize(n);
  labels.distances.resize(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    labels.depths(i) = depths[i].get<int>();
    const auto& row = rows[i];
    if (row.size() != static_cast<std::size_t>(n))
      throw ValidationError(
          fmt::format("'{}': distance row {} has wrong length", labels.id, i));
    for (std::int64_t j = 0; j < n; ++j) labels.distances(i, j) = row[j].get<int>();
  }
  if (const auto it = record.find("root"); it != record.end() && !it->is_null())
    labels.root = it->get<std::size_t>();
  if (const auto it = record.find("deprels"); it != record.end())
    labels.deprels = it->get<std::vector<std::string>>();
  validate_labels(labels);
  return labels;
}

}  // namespace

TreeLabels labels_from_json(std::string_view line) {
  std::vector<TreeLabels> out = parse_labels_jsonl(line);
  if (out.size() != 1) throw ParseError("expected exactly one labels record");
  return std::move(out.front());
}

std::string format_labels_jsonl(std::span<const TreeLabels> labels) {
  std::string out;
  for (const auto& l : labels) {
    out += labels_to_json(l);
    out += '\n';
  }
  return out;
}

std::vector<TreeLabels> parse_labels_jsonl(std::string_view text) {
  std::vector<TreeLabels> out;
  detail::for_each_jsonl(text, [&](const Json& record, std::size_t line_no) {
    try {
      out.push_back(labels_from_record(record));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("line {}: {}", line_no, e.what()));
    }
  });
  return out;
}

void write_labels_jsonl(const std::filesystem::path& path,
                        std::span<const TreeLabels> labels) {
  write_file_atomic(path, format_labels_jsonl(labels));
}

std::vector<TreeLabels> read_labels_jsonl(const std::filesystem::path& path) {
  return parse_labels_jsonl(read_text_file(path));
}

}  // namespace structprobe
