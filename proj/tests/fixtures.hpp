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

// Shared fixture loading and seeded generators for the test programs.

#ifndef STRUCTPROBE_TESTS_FIXTURES_HPP
#define STRUCTPROBE_TESTS_FIXTURES_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "structprobe/dataset.hpp"
#include "structprobe/dep_tree.hpp"
#include "structprobe/embeddings.hpp"
#include "structprobe/scene_tree.hpp"
#include "structprobe/synth.hpp"

namespace structprobe::testing {

struct SceneFixture {
  std::string name;
  DepTree tree;
  std::vector<PhraseAnnotation> phrases;
  std::vector<std::size_t> anchors;
  std::vector<std::size_t> parents;
  std::vector<int> depths;
};

inline std::vector<SceneFixture> load_scene_fixtures() {
  std::ifstream in(std::string(STRUCTPROBE_TEST_DATA) + "/scene_tree_fixtures.jsonl");
  std::vector<SceneFixture> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    std::vector<std::size_t> heads;
    for (int h : j.at("heads").get<std::vector<int>>())
      heads.push_back(h < 0 ? kRootHead : static_cast<std::size_t>(h));
    std::vector<PhraseAnnotation> phrases;
    for (const auto& span : j.at("phrases")) {
      const auto k = phrases.size();
      phrases.push_back({"p" + std::to_string(k + 1), span.at(0).get<std::size_t>(),
                         span.at(1).get<std::size_t>(),
                         {"r" + std::to_string(k + 1)}});
    }
    std::vector<std::size_t> parents;
    for (const auto& p : j.at("parents"))
      parents.push_back(p.is_null() ? kNoParent : p.get<std::size_t>());
    out.push_back({j.at("name").get<std::string>(),
                   DepTree(j.at("tokens").get<std::vector<std::string>>(), heads),
                   std::move(phrases), j.at("anchors").get<std::vector<std::size_t>>(),
                   std::move(parents), j.at("depths").get<std::vector<int>>()});
  }
  return out;
}

// A random tree with up to `max_phrases` random spans, some overlapping and
// some sharing a highest node.
struct SceneInstance {
  DepTree tree;
  std::vector<PhraseAnnotation> phrases;
};

inline SceneInstance random_scene_instance(std::uint64_t seed, std::size_t max_n = 12,
                                           std::size_t max_phrases = 6) {
  std::mt19937_64 rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
  DepTree tree = random_tree(n, rng());
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_phrases)(rng);
  std::vector<PhraseAnnotation> phrases;
  std::uniform_int_distribution<std::size_t> pos(0, n - 1);
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    phrases.push_back({"p" + std::to_string(p), a, b + 1, {"r" + std::to_string(p)}});
  }
  return {std::move(tree), std::move(phrases)};
}

// Random dataset of `count` sequences with n tokens in [min_n, max_n] and
// standard normal embeddings of the given width.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t count, std::size_t min_n,
                              std::size_t max_n, std::size_t width) {
  std::vector<TreeLabels> labels;
  std::vector<EmbeddingSequence> embeddings;
  std::normal_distribution<double> normal;
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(min_n, max_n)(rng);
    const std::string id = "s" + std::to_string(s);
    labels.push_back(make_labels(random_tree(n, rng(), id)));
    EmbeddingSequence seq;
    seq.id = id;
    seq.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
    for (Eigen::Index i = 0; i < seq.values.size(); ++i) seq.values(i) = normal(rng);
    embeddings.push_back(std::move(seq));
  }
  return make_dataset(std::move(labels), std::move(embeddings));
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace structprobe::testing

#endif  // STRUCTPROBE_TESTS_FIXTURES_HPP
