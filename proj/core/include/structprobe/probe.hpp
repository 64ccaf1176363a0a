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

#ifndef STRUCTPROBE_PROBE_HPP
#define STRUCTPROBE_PROBE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "structprobe/dataset.hpp"
#include "structprobe/dep_tree.hpp"
#include "structprobe/embeddings.hpp"

namespace structprobe {

enum class Task { kDistance, kDepth };

std::string_view to_string(Task task) noexcept;
// Accepts "distance" and "depth"; throws ValidationError otherwise.
Task parse_task(std::string_view name);

struct ProbeMeta {
  std::string layer;
  std::uint64_t seed = 0;
  std::size_t epochs_run = 0;
  std::optional<double> best_val_loss;

  friend bool operator==(const ProbeMeta&, const ProbeMeta&) = default;
};

/// A linear structural probe: a k x m matrix B applied to m-wide
/// embeddings. Distance probes read the squared B-norm of h_i - h_j as the
/// tree distance between nodes i and j; depth probes read the squared
/// B-norm of h_i as the depth of node i.
class Probe {
 public:
  // Throws ValidationError for an empty or non-finite matrix.
  Probe(Task task, Eigen::MatrixXd transform, ProbeMeta meta = {});

  Task task() const noexcept { return task_; }
  const Eigen::MatrixXd& transform() const noexcept { return transform_; }
  std::size_t rank() const noexcept {
    return static_cast<std::size_t>(transform_.rows());
  }
  std::size_t width() const noexcept {
    return static_cast<std::size_t>(transform_.cols());
  }
  const ProbeMeta& meta() const noexcept { return meta_; }
  void set_meta(ProbeMeta meta) { meta_ = std::move(meta); }

 private:
  Task task_;
  Eigen::MatrixXd transform_;
  ProbeMeta meta_;
};

// Squared distances ||B(h_i - h_j)||^2, computed once per unordered pair so
// the result is exactly symmetric with a zero diagonal.
Eigen::MatrixXd predict_distances(const Eigen::MatrixXd& transform,
                                  const Eigen::MatrixXd& embeddings);
// Squared norms ||B h_i||^2.
Eigen::VectorXd predict_depths(const Eigen::MatrixXd& transform,
                               const Eigen::MatrixXd& embeddings);

// Throw ValidationError on a task or width mismatch.
Eigen::MatrixXd predict_distances(const Probe& probe, const EmbeddingSequence& seq);
Eigen::VectorXd predict_depths(const Probe& probe, const EmbeddingSequence& seq);

// Sum over i < j of |pred - gold|, divided by n^2.
double l1_loss(const Eigen::MatrixXd& pred, const IntMatrix& gold);
// Sum over i of |pred - gold|, divided by n.
double l1_loss(const Eigen::VectorXd& pred, const IntVector& gold);

// Mean per-sequence loss over the batch (indices into `data`).
double batch_loss(Task task, const Eigen::MatrixXd& transform,
                  const Dataset& data, std::span<const std::size_t> batch);
double dataset_loss(Task task, const Eigen::MatrixXd& transform,
                    const Dataset& data);

/// Gradient of batch_loss with respect to B.
///
/// For the distance task a pair with difference u = h_i - h_j contributes
/// sign(pred - gold) * 2 (B u) u^T / n^2; for the depth task u = h_i and
/// the scale is 1 / n. Pairs whose prediction equals the gold value
/// contribute nothing. The pairwise sum is evaluated in closed form as
/// 2 B H^T L H / n^2, where L is the graph Laplacian of the sign matrix.
Eigen::MatrixXd loss_gradient(Task task, const Eigen::MatrixXd& transform,
                              const Dataset& data,
                              std::span<const std::size_t> batch);
Eigen::MatrixXd loss_gradient(const Probe& probe, const Dataset& data,
                              std::span<const std::size_t> batch);

// Probe file: {"task": str, "k": int, "m": int,
//              "B": "<base64 f64le row-major>", "meta": {...}}
std::string probe_to_json(const Probe& probe);
Probe probe_from_json(std::string_view text);
void write_probe(const Probe& probe, const std::filesystem::path& path);
Probe read_probe(const std::filesystem::path& path);

}  // namespace structprobe

#endif  // STRUCTPROBE_PROBE_HPP
