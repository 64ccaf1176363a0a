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

#ifndef STRUCTPROBE_SCENE_TREE_HPP
#define STRUCTPROBE_SCENE_TREE_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "structprobe/dep_tree.hpp"

namespace structprobe {

/// A caption phrase grounded to one or more image regions. The phrase
/// covers the half-open token interval [start, end) of its caption.
struct PhraseAnnotation {
  std::string phrase_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::string> region_ids;
};

inline constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

/// Tree of grounded phrases under the full image.
///
/// Node 0 is the image and is anchored at the dependency root. Node i > 0
/// is phrases[i - 1] in input order. `text_node[i]` is the dependency token
/// the node is anchored at (the phrase's highest token) and
/// `text_depth[i]` that token's depth in the dependency tree.
struct SceneTree {
  std::string image_id;
  std::vector<std::string> nodes;
  std::vector<std::size_t> parent;
  std::vector<int> depth;
  std::vector<std::size_t> text_node;
  std::vector<int> text_depth;
  std::map<std::string, std::size_t> region_of;

  std::size_t size() const noexcept { return nodes.size(); }
};

// Token of the span closest to the dependency root; the leftmost one among
// equally shallow candidates. Throws ValidationError for an empty or
// out-of-range span.
std::size_t find_highest_node(const PhraseAnnotation& phrase,
                              const DepTree& tree);

// Projects the dependency tree onto the phrases. Phrases are attached in
// ascending order of their anchor depth (input order among equals); each
// attaches below the nearest already-attached phrase found by walking from
// its anchor token up the head chain, starting at the anchor itself. A
// phrase anchored at the same token as an earlier phrase therefore becomes
// that phrase's child. When the walk leaves the dependency root the phrase
// attaches to the image.
//
// Throws ValidationError for bad spans, empty region lists, duplicate
// phrase ids, and regions claimed by two phrases.
SceneTree construct_scene_tree(const DepTree& tree,
                               std::span<const PhraseAnnotation> phrases,
                               std::string image_id);

// Path length between every pair of scene-tree nodes.
IntMatrix scene_distances(const SceneTree& scene);

// Labels for the visual sequence [image, region_order...]. Regions of the
// same phrase share a node, so they sit at distance 0 from each other.
// The result has no root index. Throws ValidationError for unknown regions.
TreeLabels visual_labels(const SceneTree& scene,
                         std::span<const std::string> region_order,
                         std::string id = {});

// Pairs of phrase ids whose token spans intersect.
std::vector<std::pair<std::string, std::string>> find_phrase_overlaps(
    std::span<const PhraseAnnotation> phrases);

}  // namespace structprobe

#endif  // STRUCTPROBE_SCENE_TREE_HPP
