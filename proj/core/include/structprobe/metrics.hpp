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

#ifndef STRUCTPROBE_METRICS_HPP
#define STRUCTPROBE_METRICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "structprobe/dep_tree.hpp"

namespace structprobe {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. Absent when the inputs have
// fewer than two entries or either rank vector is constant. Throws
// ValidationError when the lengths differ.
std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y);

enum class SpearmanMode {
  kRowWise,      // mean over nodes of Spearman(pred row, gold row)
  kWholeMatrix,  // one Spearman over the strict upper triangle
};

// Per-sequence distance score. Rows with an absent correlation are
// skipped; absent when every row is.
std::optional<double> distance_spearman(const Eigen::MatrixXd& pred,
                                        const IntMatrix& gold,
                                        SpearmanMode mode = SpearmanMode::kRowWise);
std::optional<double> depth_spearman(const Eigen::VectorXd& pred,
                                     const IntVector& gold);

struct LengthRange {
  std::size_t min = 5;
  std::size_t max = 50;
};

// Averages the present scores per sequence length, then averages those
// per-length means over lengths inside `range` (inclusive). Absent when no
// length in range has a present score.
std::optional<double> length_binned_spearman(
    std::span<const std::optional<double>> scores,
    std::span<const std::size_t> lengths, LengthRange range = {});

using Edge = std::pair<std::size_t, std::size_t>;

// Prim's algorithm on the complete graph with the given symmetric weights.
// Edges are returned as (smaller, larger) pairs in the order they join the
// tree. Equal weights are resolved toward the lexicographically smallest
// edge, which makes the result the unique minimum under the total order
// (weight, first, second).
std::vector<Edge> minimum_spanning_tree(const Eigen::MatrixXd& weights);

// Undirected edges (i < j) at gold distance 1.
std::vector<Edge> gold_edges(const IntMatrix& distances);

struct AttachmentCount {
  std::size_t correct = 0;
  std::size_t total = 0;
};

// Gold edges recovered by the minimum spanning tree of the predicted
// distances. When `keep` is non-empty only nodes with keep[i] take part:
// the tree is decoded over the kept nodes and scored against the gold
// edges between kept nodes.
AttachmentCount attachment_count(const Eigen::MatrixXd& pred,
                                 const TreeLabels& gold,
                                 const std::vector<bool>& keep = {});

// correct / total, absent when the sequence has no scorable edge.
std::optional<double> uuas(const Eigen::MatrixXd& pred, const TreeLabels& gold,
                           const std::vector<bool>& keep = {});

// Smallest index attaining the minimum.
std::size_t predicted_root(const Eigen::VectorXd& pred_depths);

// Fraction of sequences whose predicted root equals the gold root. Throws
// ValidationError for labels without a root (visual sequences) and for
// mismatched inputs.
double root_accuracy(std::span<const Eigen::VectorXd> pred_depths,
                     std::span<const TreeLabels> gold);

}  // namespace structprobe

#endif  // STRUCTPROBE_METRICS_HPP
