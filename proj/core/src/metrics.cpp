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

#include "structprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold equal values; ranks are 1-based.
    const double mean_rank = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError(
        fmt::format("spearman inputs differ in length: {} vs {}", x.size(), y.size()));
  if (x.size() < 2) return std::nullopt;
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double mean_y = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> distance_spearman(const Eigen::MatrixXd& pred,
                                        const IntMatrix& gold, SpearmanMode mode) {
  if (pred.rows() != gold.rows() || pred.cols() != gold.cols())
    throw ValidationError("distance_spearman: shape mismatch");
  const auto n = pred.rows();
  if (mode == SpearmanMode::kWholeMatrix) {
    std::vector<double> p, g;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        p.push_back(pred(i, j));
        g.push_back(gold(i, j));
      }
    return spearman(p, g);
  }
  double sum = 0.0;
  std::size_t present = 0;
  std::vector<double> p(n), g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      p[j] = pred(i, j);
      g[j] = gold(i, j);
    }
    if (const auto r = spearman(p, g)) {
      sum += *r;
      ++present;
    }
  }
  if (present == 0) return std::nullopt;
  return sum / static_cast<double>(present);
}

std::optional<double> depth_spearman(const Eigen::VectorXd& pred,
                                     const IntVector& gold) {
  if (pred.size() != gold.size())
    throw ValidationError("depth_spearman: length mismatch");
  const Eigen::VectorXd g = gold.cast<double>();
  return spearman(std::span<const double>(pred.data(), pred.size()),
                  std::span<const double>(g.data(), g.size()));
}

std::optional<double> length_binned_spearman(
    std::span<const std::optional<double>> scores,
    std::span<const std::size_t> lengths, LengthRange range) {
  if (scores.size() != lengths.size())
    throw ValidationError("length_binned_spearman: scores and lengths differ in size");
  std::map<std::size_t, std::pair<double, std::size_t>> bins;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i] || lengths[i] < range.min || lengths[i] > range.max) continue;
    auto& [sum, count] = bins[lengths[i]];
    sum += *scores[i];
    ++count;
  }
  if (bins.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [length, bin] : bins)
    total += bin.first / static_cast<double>(bin.second);
  return total / static_cast<double>(bins.size());
}

std::vector<Edge> minimum_spanning_tree(const Eigen::MatrixXd& weights) {
  const auto n = static_cast<std::size_t>(weights.rows());
  if (n < 2) return {};
  using Key = std::tuple<double, std::size_t, std::size_t>;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Key none{kInf, n, n};

  std::vector<bool> in_tree(n, false);
  std::vector<Key> best(n, none);
  std::vector<Edge> edges;
  edges.reserve(n - 1);

  std::size_t added = 0;
  for (std::size_t step = 0; step < n; ++step) {
    in_tree[added] = true;
    if (step > 0) edges.emplace_back(std::get<1>(best[added]), std::get<2>(best[added]));
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Key candidate{weights(added, v), std::min(added, v), std::max(added, v)};
      if (candidate < best[v]) best[v] = candidate;
    }
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && (next == n || best[v] < best[next])) next = v;
    if (next == n) break;
    added = next;
  }
  return edges;
}

std::vector<Edge> gold_edges(const IntMatrix& distances) {
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < distances.rows(); ++i)
    for (Eigen::Index j = i + 1; j < distances.cols(); ++j)
      if (distances(i, j) == 1)
        edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return edges;
}

AttachmentCount attachment_count(const Eigen::MatrixXd& pred,
                                 const TreeLabels& gold, const std::vector<bool>& keep) {
  const auto n = static_cast<std::size_t>(gold.size());
  if (static_cast<std::size_t>(pred.rows()) != n ||
      static_cast<std::size_t>(pred.cols()) != n)
    throw ValidationError(fmt::format("sequence '{}': prediction shape mismatch", gold.id));
  if (!keep.empty() && keep.size() != n)
    throw ValidationError(fmt::format("sequence '{}': keep mask has wrong length", gold.id));

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i)
    if (keep.empty() || keep[i]) kept.push_back(i);

  const auto k = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd sub(k, k);
  IntMatrix sub_gold(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = pred(kept[a], kept[b]);
      sub_gold(a, b) = gold.distances(kept[a], kept[b]);
    }

  const std::vector<Edge> truth = gold_edges(sub_gold);
  std::vector<Edge> predicted = minimum_spanning_tree(sub);
  std::sort(predicted.begin(), predicted.end());
  AttachmentCount count;
  count.total = truth.size();
  for (const Edge& e : truth)
    if (std::binary_search(predicted.begin(), predicted.end(), e)) ++count.correct;
  return count;
}

std::optional<double> uuas(const Eigen::MatrixXd& pred, const TreeLabels& gold,
                           const std::vector<bool>& keep) {
  const AttachmentCount count = attachment_count(pred, gold, keep);
  if (count.total == 0) return std::nullopt;
  return static_cast<double>(count.correct) / static_cast<double>(count.total);
}

std::size_t predicted_root(const Eigen::VectorXd& pred_depths) {
  if (pred_depths.size() == 0) throw ValidationError("empty depth prediction");
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < pred_depths.size(); ++i)
    if (pred_depths(i) < pred_depths(static_cast<Eigen::Index>(best)))
      best = static_cast<std::size_t>(i);
  return best;
}

double root_accuracy(std::span<const Eigen::VectorXd> pred_depths,
                     std::span<const TreeLabels> gold) {
  if (pred_depths.size() != gold.size())
    throw ValidationError("root_accuracy: prediction and label counts differ");
  if (gold.empty()) throw ValidationError("root_accuracy: no sequences");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].root)
      throw ValidationError(fmt::format(
          "sequence '{}' has no root index; root accuracy applies to textual "
          "labels only",
          gold[i].id));
    if (static_cast<std::size_t>(pred_depths[i].size()) != gold[i].size())
      throw ValidationError(
          fmt::format("sequence '{}': prediction length mismatch", gold[i].id));
    if (predicted_root(pred_depths[i]) == *gold[i].root) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

}  // namespace structprobe
