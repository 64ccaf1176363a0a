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

#include "structprobe/grounding.hpp"

#include <set>
#include <unordered_map>

#include "jsonl.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"
#include "structprobe/labels_io.hpp"

namespace structprobe {

using detail::field;
using detail::Json;

std::vector<GroundedCaption> parse_grounding_jsonl(std::string_view text) {
  std::vector<GroundedCaption> out;
  detail::for_each_jsonl(text, [&](const Json& record, std::size_t line_no) {
    try {
      GroundedCaption caption;
      caption.image_id = field(record, "image_id").get<std::string>();
      caption.sentence_id = field(record, "sentence_id").get<std::string>();
      if (const auto it = record.find("tokens"); it != record.end())
        caption.tokens = it->get<std::vector<std::string>>();
      if (const auto it = record.find("regions"); it != record.end())
        caption.regions = it->get<std::vector<std::string>>();
      for (const auto& p : field(record, "phrases")) {
        PhraseAnnotation phrase;
        phrase.phrase_id = field(p, "phrase_id").get<std::string>();
        const auto start = field(p, "start").get<std::int64_t>();
        const auto end = field(p, "end").get<std::int64_t>();
        if (start < 0 || end < 0)
          throw ParseError("negative phrase offset in '" + phrase.phrase_id + "'");
        phrase.start = static_cast<std::size_t>(start);
        phrase.end = static_cast<std::size_t>(end);
        phrase.region_ids = field(p, "region_ids").get<std::vector<std::string>>();
        if (phrase.region_ids.empty()) continue;
        caption.phrases.push_back(std::move(phrase));
      }
      out.push_back(std::move(caption));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return out;
}

std::vector<GroundedCaption> read_grounding_jsonl(
    const std::filesystem::path& path) {
  return parse_grounding_jsonl(read_text_file(path));
}

std::vector<std::string> region_sequence(const GroundedCaption& caption) {
  if (!caption.regions.empty()) return caption.regions;
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& phrase : caption.phrases)
    for (const auto& region : phrase.region_ids)
      if (seen.insert(region).second) order.push_back(region);
  return order;
}

SceneTreeRecord build_scene_record(const DepTree& tree,
                                   const GroundedCaption& caption) {
  if (!caption.tokens.empty() && caption.tokens.size() != tree.size())
    throw ValidationError(fmt::format(
        "sentence '{}': grounding has {} tokens, tree has {}",
        caption.sentence_id, caption.tokens.size(), tree.size()));
  SceneTreeRecord record;
  record.scene = construct_scene_tree(tree, caption.phrases, caption.image_id);
  record.regions = region_sequence(caption);
  record.labels = visual_labels(record.scene, record.regions, caption.sentence_id);
  record.overlaps = find_phrase_overlaps(caption.phrases);
  return record;
}

std::string scene_record_to_json(const SceneTreeRecord& record) {
  Json out = Json::parse(labels_to_json(record.labels));
  const SceneTree& scene = record.scene;
  out["image_id"] = scene.image_id;
  out["regions"] = record.regions;
  out["nodes"] = scene.nodes;
  Json parents = Json::array();
  for (std::size_t p : scene.parent) {
    if (p == kNoParent)
      parents.push_back(nullptr);
    else
      parents.push_back(p);
  }
  out["parents"] = std::move(parents);
  Json phrase_to_text = Json::object();
  for (std::size_t i = 1; i < scene.size(); ++i)
    phrase_to_text[scene.nodes[i]] = scene.text_node[i];
  out["phrase_to_text"] = std::move(phrase_to_text);
  return out.dump();
}

std::vector<SceneTreeRecord> build_scene_records(
    std::span<const DepTree> trees, std::span<const GroundedCaption> captions) {
  std::unordered_map<std::string, const DepTree*> by_id;
  for (const auto& tree : trees) by_id.emplace(tree.id(), &tree);
  std::vector<SceneTreeRecord> out;
  out.reserve(captions.size());
  for (const auto& caption : captions) {
    const auto it = by_id.find(caption.sentence_id);
    if (it == by_id.end())
      throw ValidationError(
          fmt::format("no dependency tree for sentence '{}'", caption.sentence_id));
    out.push_back(build_scene_record(*it->second, caption));
  }
  return out;
}

}  // namespace structprobe
