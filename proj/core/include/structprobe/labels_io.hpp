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

#ifndef STRUCTPROBE_LABELS_IO_HPP
#define STRUCTPROBE_LABELS_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "structprobe/dep_tree.hpp"

namespace structprobe {

// Labels JSON Lines: one object per sequence,
//   {"id": str, "n": int, "depths": [int], "distances": [[int]], "root": int}
// `root` is omitted for visual sequences. An optional `deprels` array is
// written when relation labels are known. Unknown keys are ignored on read,
// so scene-tree records load as plain labels.
std::string labels_to_json(const TreeLabels& labels);
TreeLabels labels_from_json(std::string_view line);

std::string format_labels_jsonl(std::span<const TreeLabels> labels);
std::vector<TreeLabels> parse_labels_jsonl(std::string_view text);

void write_labels_jsonl(const std::filesystem::path& path,
                        std::span<const TreeLabels> labels);
std::vector<TreeLabels> read_labels_jsonl(const std::filesystem::path& path);

}  // namespace structprobe

#endif  // STRUCTPROBE_LABELS_IO_HPP
