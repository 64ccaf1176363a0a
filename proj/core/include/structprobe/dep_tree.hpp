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

#ifndef STRUCTPROBE_DEP_TREE_HPP
#define STRUCTPROBE_DEP_TREE_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace structprobe {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<int, Eigen::Dynamic, 1>;

// Head value of the root token. Never a valid token index.
inline constexpr std::size_t kRootHead = std::numeric_limits<std::size_t>::max();

/// A rooted dependency tree over the tokens of one sentence.
///
/// Token indices are zero-based. `head(i)` is the index of the syntactic
/// parent of token i, or kRootHead for the single root token. Construction
/// validates the tree invariants (one root, every head in range, acyclic)
/// and throws ValidationError otherwise, so every DepTree in existence is
/// a valid tree.
class DepTree {
 public:
  DepTree(std::vector<std::string> tokens, std::vector<std::size_t> heads,
          std::vector<std::string> deprels = {}, std::string id = {});

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t root() const noexcept { return root_; }
  std::size_t head(std::size_t i) const { return heads_.at(i); }
  bool is_root(std::size_t i) const { return heads_.at(i) == kRootHead; }

  const std::string& id() const noexcept { return id_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::size_t>& heads() const noexcept { return heads_; }
  // Empty when the source carried no relation labels.
  const std::vector<std::string>& deprels() const noexcept { return deprels_; }
  const std::vector<std::size_t>& children(std::size_t i) const {
    return children_.at(i);
  }

  // Undirected adjacency (parent plus children) of token i.
  std::vector<std::size_t> neighbours(std::size_t i) const;

 private:
  std::string id_;
  std::vector<std::string> tokens_;
  std::vector<std::size_t> heads_;
  std::vector<std::string> deprels_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
};

/// Gold structural labels for one sequence of n nodes: the tree path
/// length between every pair of nodes and the depth of every node.
/// `root` is empty for visual sequences, whose root is always position 0.
struct TreeLabels {
  std::string id;
  IntMatrix distances;
  IntVector depths;
  std::optional<std::size_t> root;
  // Per-node relation labels, carried along for punctuation filtering.
  std::vector<std::string> deprels;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(depths.size());
  }

  friend bool operator==(const TreeLabels& a, const TreeLabels& b) {
    return a.id == b.id && a.distances == b.distances &&
           a.depths == b.depths && a.root == b.root && a.deprels == b.deprels;
  }
};

// All-pairs path lengths, one breadth-first search per source node.
IntMatrix tree_distances(const DepTree& tree);

// Edge count from the root to every token.
IntVector tree_depths(const DepTree& tree);

// Distances, depths, root and deprels of `tree`, keyed by the tree's id.
TreeLabels make_labels(const DepTree& tree);

// Checks the label invariants (square symmetric zero-diagonal distances,
// depth bounds, single zero-depth root when `root` is set) and throws
// ValidationError on the first violation.
void validate_labels(const TreeLabels& labels);

}  // namespace structprobe

#endif  // STRUCTPROBE_DEP_TREE_HPP
