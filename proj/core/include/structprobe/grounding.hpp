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

#ifndef STRUCTPROBE_GROUNDING_HPP
#define STRUCTPROBE_GROUNDING_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "structprobe/dep_tree.hpp"
#include "structprobe/scene_tree.hpp"

namespace structprobe {

// One grounding JSON Lines record:
//   {"image_id": str, "sentence_id": str, "tokens": [str],
//    "phrases": [{"phrase_id": str, "start": int, "end": int,
//                 "region_ids": [str]}],
//    "regions": [str]}            // optional visual sequence order
// Phrases with an empty region list are dropped while reading.
struct GroundedCaption {
  std::string image_id;
  std::string sentence_id;
  std::vector<std::string> tokens;
  std::vector<PhraseAnnotation> phrases;
  std::vector<std::string> regions;
};

std::vector<GroundedCaption> parse_grounding_jsonl(std::string_view text);
std::vector<GroundedCaption> read_grounding_jsonl(
    const std::filesystem::path& path);

// The explicit `regions` list when present, otherwise region ids in order
// of first appearance across the phrases.
std::vector<std::string> region_sequence(const GroundedCaption& caption);

struct SceneTreeRecord {
  SceneTree scene;
  std::vector<std::string> regions;
  TreeLabels labels;
  std::vector<std::pair<std::string, std::string>> overlaps;
};

// Builds the scene tree and visual labels for one caption. The caption's
// token count must match the tree when tokens are given.
SceneTreeRecord build_scene_record(const DepTree& tree,
                                   const GroundedCaption& caption);

// Labels JSON plus "image_id", "regions", "nodes", "parents" (null for
// the image), and "phrase_to_text" (phrase id -> token index).
std::string scene_record_to_json(const SceneTreeRecord& record);

// Pairs captions with trees by sentence id. Throws ValidationError for a
// caption whose sentence is missing.
std::vector<SceneTreeRecord> build_scene_records(
    std::span<const DepTree> trees, std::span<const GroundedCaption> captions);

}  // namespace structprobe

#endif  // STRUCTPROBE_GROUNDING_HPP
