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

#include "structprobe/dep_tree.hpp"

#include <cstdlib>
#include <queue>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

namespace {

std::string describe(const std::string& id) {
  return id.empty() ? std::string("sentence") : fmt::format("sentence '{}'", id);
}

}  // namespace

DepTree::DepTree(std::vector<std::string> tokens,
                 std::vector<std::size_t> heads,
                 std::vector<std::string> deprels, std::string id)
    : id_(std::move(id)),
      tokens_(std::move(tokens)),
      heads_(std::move(heads)),
      deprels_(std::move(deprels)) {
  const std::size_t n = tokens_.size();
  if (n == 0) throw ValidationError(describe(id_) + ": empty tree");
  if (heads_.size() != n)
    throw ValidationError(fmt::format("{}: {} tokens but {} heads",
                                      describe(id_), n, heads_.size()));
  if (!deprels_.empty() && deprels_.size() != n)
    throw ValidationError(fmt::format("{}: {} tokens but {} relation labels",
                                      describe(id_), n, deprels_.size()));

  std::size_t roots = 0;
  children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (heads_[i] == kRootHead) {
      ++roots;
      root_ = i;
      continue;
    }
    if (heads_[i] >= n)
      throw ValidationError(fmt::format("{}: token {} has head {} out of range",
                                        describe(id_), i, heads_[i]));
    if (heads_[i] == i)
      throw ValidationError(
          fmt::format("{}: token {} is its own head", describe(id_), i));
    children_[heads_[i]].push_back(i);
  }
  if (roots == 0) throw ValidationError(describe(id_) + ": no root token");
  if (roots > 1)
    throw ValidationError(
        fmt::format("{}: multiple root tokens ({})", describe(id_), roots));

  // With one root and n-1 parent links the structure is a tree iff every
  // token is reachable from the root.
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{root_};
  std::size_t reached = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    seen[v] = true;
    ++reached;
    for (std::size_t c : children_[v]) stack.push_back(c);
  }
  if (reached != n) {
    std::size_t first = 0;
    while (seen[first]) ++first;
    throw ValidationError(fmt::format(
        "{}: head relation has a cycle through token {}", describe(id_), first));
  }
}

std::vector<std::size_t> DepTree::neighbours(std::size_t i) const {
  std::vector<std::size_t> out;
  out.reserve(children_.at(i).size() + 1);
  if (heads_[i] != kRootHead) out.push_back(heads_[i]);
  out.insert(out.end(), children_[i].begin(), children_[i].end());
  return out;
}

IntMatrix tree_distances(const DepTree& tree) {
  const std::size_t n = tree.size();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) adjacency[i] = tree.neighbours(i);

  IntMatrix dist = IntMatrix::Constant(n, n, -1);
  std::queue<std::size_t> frontier;
  for (std::size_t source = 0; source < n; ++source) {
    dist(source, source) = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w : adjacency[v]) {
        if (dist(source, w) >= 0) continue;
        dist(source, w) = dist(source, v) + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

IntVector tree_depths(const DepTree& tree) {
  IntVector depth = IntVector::Constant(tree.size(), -1);
  std::queue<std::size_t> frontier;
  depth(tree.root()) = 0;
  frontier.push(tree.root());
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t c : tree.children(v)) {
      depth(c) = depth(v) + 1;
      frontier.push(c);
    }
  }
  return depth;
}

TreeLabels make_labels(const DepTree& tree) {
  return TreeLabels{tree.id(), tree_distances(tree), tree_depths(tree),
                    tree.root(), tree.deprels()};
}

void validate_labels(const TreeLabels& labels) {
  const auto n = labels.depths.size();
  const std::string who = describe(labels.id);
  if (n == 0) throw ValidationError(who + ": empty labels");
  if (labels.distances.rows() != n || labels.distances.cols() != n)
    throw ValidationError(fmt::format("{}: distance matrix is {}x{}, expected {}x{}",
                                      who, labels.distances.rows(),
                                      labels.distances.cols(), n, n));
  if (!labels.deprels.empty() &&
      labels.deprels.size() != static_cast<std::size_t>(n))
    throw ValidationError(who + ": deprels length differs from n");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels.depths(i) < 0)
      throw ValidationError(fmt::format("{}: negative depth at {}", who, i));
    if (labels.distances(i, i) != 0)
      throw ValidationError(fmt::format("{}: nonzero diagonal at {}", who, i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const int d = labels.distances(i, j);
      if (d != labels.distances(j, i))
        throw ValidationError(
            fmt::format("{}: distances not symmetric at ({}, {})", who, i, j));
      const int lo = std::abs(labels.depths(i) - labels.depths(j));
      const int hi = labels.depths(i) + labels.depths(j);
      if (d < lo || d > hi)
        throw ValidationError(fmt::format(
            "{}: distance {} at ({}, {}) outside depth bounds [{}, {}]", who, d,
            i, j, lo, hi));
    }
  }
  if (labels.root) {
    if (*labels.root >= static_cast<std::size_t>(n))
      throw ValidationError(who + ": root index out of range");
    if ((labels.depths.array() == 0).count() != 1 ||
        labels.depths(static_cast<Eigen::Index>(*labels.root)) != 0)
      throw ValidationError(who + ": root must be the unique zero-depth node");
  }
}

}  // namespace structprobe
