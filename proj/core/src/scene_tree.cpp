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

#include "structprobe/scene_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

namespace {

void check_span(const PhraseAnnotation& phrase, std::size_t n) {
  if (phrase.start >= phrase.end)
    throw ValidationError(fmt::format("phrase '{}': empty span [{}, {})",
                                      phrase.phrase_id, phrase.start, phrase.end));
  if (phrase.end > n)
    throw ValidationError(
        fmt::format("phrase '{}': span [{}, {}) exceeds sentence length {}",
                    phrase.phrase_id, phrase.start, phrase.end, n));
}

std::size_t highest_in_span(const PhraseAnnotation& phrase,
                            const IntVector& depths) {
  std::size_t best = phrase.start;
  for (std::size_t i = phrase.start + 1; i < phrase.end; ++i)
    if (depths(i) < depths(best)) best = i;
  return best;
}

}  // namespace

std::size_t find_highest_node(const PhraseAnnotation& phrase,
                              const DepTree& tree) {
  check_span(phrase, tree.size());
  return highest_in_span(phrase, tree_depths(tree));
}

SceneTree construct_scene_tree(const DepTree& tree,
                               std::span<const PhraseAnnotation> phrases,
                               std::string image_id) {
  const IntVector text_depths = tree_depths(tree);
  const std::size_t count = phrases.size() + 1;

  SceneTree scene;
  scene.image_id = std::move(image_id);
  scene.nodes.reserve(count);
  scene.nodes.push_back(scene.image_id);
  scene.parent.assign(count, kNoParent);
  scene.depth.assign(count, 0);
  scene.text_node.assign(count, tree.root());
  scene.text_depth.assign(count, 0);

  std::set<std::string> seen_ids;
  for (std::size_t p = 0; p < phrases.size(); ++p) {
    const PhraseAnnotation& phrase = phrases[p];
    check_span(phrase, tree.size());
    if (phrase.region_ids.empty())
      throw ValidationError(
          fmt::format("phrase '{}' has no regions", phrase.phrase_id));
    if (!seen_ids.insert(phrase.phrase_id).second)
      throw ValidationError(
          fmt::format("duplicate phrase id '{}'", phrase.phrase_id));
    const std::size_t node = p + 1;
    scene.nodes.push_back(phrase.phrase_id);
    scene.text_node[node] = highest_in_span(phrase, text_depths);
    scene.text_depth[node] = text_depths(scene.text_node[node]);
    for (const auto& region : phrase.region_ids) {
      const auto [it, inserted] = scene.region_of.emplace(region, node);
      if (!inserted && it->second != node)
        throw ValidationError(fmt::format(
            "region '{}' is claimed by phrases '{}' and '{}'", region,
            scene.nodes[it->second], phrase.phrase_id));
    }
  }

  std::vector<std::size_t> order(phrases.size());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scene.text_depth[a] < scene.text_depth[b];
  });

  // Attached phrases per dependency token, in attachment order.
  std::vector<std::vector<std::size_t>> members(tree.size());
  for (std::size_t node : order) {
    std::size_t token = scene.text_node[node];
    std::size_t parent = 0;
    while (true) {
      if (!members[token].empty()) {
        parent = members[token].front();
        break;
      }
      if (tree.is_root(token)) break;
      token = tree.head(token);
    }
    scene.parent[node] = parent;
    scene.depth[node] = scene.depth[parent] + 1;
    members[scene.text_node[node]].push_back(node);
  }
  return scene;
}

IntMatrix scene_distances(const SceneTree& scene) {
  const std::size_t n = scene.size();
  IntMatrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      std::size_t a = i;
      std::size_t b = j;
      int steps = 0;
      while (a != b) {
        if (scene.depth[a] >= scene.depth[b]) {
          a = scene.parent[a];
        } else {
          b = scene.parent[b];
        }
        ++steps;
      }
      dist(i, j) = dist(j, i) = steps;
    }
  }
  return dist;
}

TreeLabels visual_labels(const SceneTree& scene,
                         std::span<const std::string> region_order,
                         std::string id) {
  std::vector<std::size_t> position_node{0};
  position_node.reserve(region_order.size() + 1);
  for (const auto& region : region_order) {
    const auto it = scene.region_of.find(region);
    if (it == scene.region_of.end())
      throw ValidationError(fmt::format("unknown region '{}' for image '{}'",
                                        region, scene.image_id));
    position_node.push_back(it->second);
  }

  const IntMatrix node_dist = scene_distances(scene);
  const auto n = static_cast<Eigen::Index>(position_node.size());
  TreeLabels labels;
  labels.id = std::move(id);
  labels.depths.resize(n);
  labels.distances.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    labels.depths(i) = scene.depth[position_node[i]];
    for (Eigen::Index j = 0; j < n; ++j)
      labels.distances(i, j) = node_dist(position_node[i], position_node[j]);
  }
  return labels;
}

std::vector<std::pair<std::string, std::string>> find_phrase_overlaps(
    std::span<const PhraseAnnotation> phrases) {
  std::vector<std::pair<std::string, std::string>> overlaps;
  for (std::size_t a = 0; a < phrases.size(); ++a)
    for (std::size_t b = a + 1; b < phrases.size(); ++b)
      if (std::max(phrases[a].start, phrases[b].start) <
          std::min(phrases[a].end, phrases[b].end))
        overlaps.emplace_back(phrases[a].phrase_id, phrases[b].phrase_id);
  return overlaps;
}

}  // namespace structprobe
