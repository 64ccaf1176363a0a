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

#include "structprobe/probe.hpp"

#include <cmath>

#include <fmt/core.h>

#include "base64.hpp"
#include "jsonl.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

using detail::field;
using detail::Json;

std::string_view to_string(Task task) noexcept {
  return task == Task::kDistance ? "distance" : "depth";
}

Task parse_task(std::string_view name) {
  if (name == "distance") return Task::kDistance;
  if (name == "depth") return Task::kDepth;
  throw ValidationError(fmt::format("unknown task '{}'", name));
}

Probe::Probe(Task task, Eigen::MatrixXd transform, ProbeMeta meta)
    : task_(task), transform_(std::move(transform)), meta_(std::move(meta)) {
  if (transform_.rows() < 1 || transform_.cols() < 1)
    throw ValidationError("probe matrix must be at least 1x1");
  if (!transform_.allFinite())
    throw ValidationError("probe matrix has non-finite entries");
}

Eigen::MatrixXd predict_distances(const Eigen::MatrixXd& transform,
                                  const Eigen::MatrixXd& embeddings) {
  const Eigen::MatrixXd projected = embeddings * transform.transpose();
  const auto n = projected.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (projected.row(i) - projected.row(j)).squaredNorm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

Eigen::VectorXd predict_depths(const Eigen::MatrixXd& transform,
                               const Eigen::MatrixXd& embeddings) {
  return (embeddings * transform.transpose()).rowwise().squaredNorm();
}

namespace {

void check_compatible(const Probe& probe, Task task, const EmbeddingSequence& seq) {
  if (probe.task() != task)
    throw ValidationError(fmt::format("{} probe used for {} prediction",
                                      to_string(probe.task()), to_string(task)));
  if (probe.width() != seq.width())
    throw ValidationError(fmt::format("sequence '{}': width {} but probe expects {}",
                                      seq.id, seq.width(), probe.width()));
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double sequence_loss(Task task, const Eigen::MatrixXd& transform,
                     const TreeLabels& gold, const EmbeddingSequence& seq) {
  if (task == Task::kDistance)
    return l1_loss(predict_distances(transform, seq.values), gold.distances);
  return l1_loss(predict_depths(transform, seq.values), gold.depths);
}

}  // namespace

Eigen::MatrixXd predict_distances(const Probe& probe, const EmbeddingSequence& seq) {
  check_compatible(probe, Task::kDistance, seq);
  return predict_distances(probe.transform(), seq.values);
}

Eigen::VectorXd predict_depths(const Probe& probe, const EmbeddingSequence& seq) {
  check_compatible(probe, Task::kDepth, seq);
  return predict_depths(probe.transform(), seq.values);
}

double l1_loss(const Eigen::MatrixXd& pred, const IntMatrix& gold) {
  if (pred.rows() != gold.rows() || pred.cols() != gold.cols() ||
      pred.rows() != pred.cols())
    throw ValidationError(fmt::format("distance shapes differ: {}x{} vs {}x{}",
                                      pred.rows(), pred.cols(), gold.rows(),
                                      gold.cols()));
  const auto n = pred.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      total += std::abs(pred(i, j) - gold(i, j));
  return total / static_cast<double>(n * n);
}

double l1_loss(const Eigen::VectorXd& pred, const IntVector& gold) {
  if (pred.size() != gold.size())
    throw ValidationError(
        fmt::format("depth shapes differ: {} vs {}", pred.size(), gold.size()));
  return (pred - gold.cast<double>()).cwiseAbs().sum() /
         static_cast<double>(pred.size());
}

double batch_loss(Task task, const Eigen::MatrixXd& transform,
                  const Dataset& data, std::span<const std::size_t> batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t idx : batch)
    total += sequence_loss(task, transform, data.labels.at(idx), data.embeddings.at(idx));
  return total / static_cast<double>(batch.size());
}

double dataset_loss(Task task, const Eigen::MatrixXd& transform,
                    const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return batch_loss(task, transform, data, all);
}

Eigen::MatrixXd loss_gradient(Task task, const Eigen::MatrixXd& transform,
                              const Dataset& data,
                              std::span<const std::size_t> batch) {
  const auto m = transform.cols();
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t idx : batch) {
    const Eigen::MatrixXd& h = data.embeddings.at(idx).values;
    const TreeLabels& gold = data.labels.at(idx);
    const auto n = h.rows();
    if (h.cols() != m)
      throw ValidationError(fmt::format("sequence '{}': width {} but probe expects {}",
                                        gold.id, h.cols(), m));
    if (task == Task::kDistance) {
      const Eigen::MatrixXd pred = predict_distances(transform, h);
      Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          const double s = sign(pred(i, j) - gold.distances(i, j));
          laplacian(i, j) -= s;
          laplacian(j, i) -= s;
          laplacian(i, i) += s;
          laplacian(j, j) += s;
        }
      }
      weighted += h.transpose() * laplacian * h / static_cast<double>(n * n);
    } else {
      const Eigen::VectorXd pred = predict_depths(transform, h);
      Eigen::VectorXd s(n);
      for (Eigen::Index i = 0; i < n; ++i) s(i) = sign(pred(i) - gold.depths(i));
      weighted += h.transpose() * s.asDiagonal() * h / static_cast<double>(n);
    }
  }
  if (batch.empty()) return Eigen::MatrixXd::Zero(transform.rows(), m);
  return 2.0 * transform * weighted / static_cast<double>(batch.size());
}

Eigen::MatrixXd loss_gradient(const Probe& probe, const Dataset& data,
                              std::span<const std::size_t> batch) {
  return loss_gradient(probe.task(), probe.transform(), data, batch);
}

std::string probe_to_json(const Probe& probe) {
  const Eigen::MatrixXd& b = probe.transform();
  std::vector<double> row_major;
  row_major.reserve(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) row_major.push_back(b(i, j));

  Json meta;
  meta["layer"] = probe.meta().layer;
  meta["seed"] = probe.meta().seed;
  meta["epochs_run"] = probe.meta().epochs_run;
  if (probe.meta().best_val_loss)
    meta["best_val_loss"] = *probe.meta().best_val_loss;
  else
    meta["best_val_loss"] = nullptr;

  Json record;
  record["task"] = to_string(probe.task());
  record["k"] = b.rows();
  record["m"] = b.cols();
  record["B"] = detail::base64_encode(detail::pack_f64le(row_major));
  record["meta"] = std::move(meta);
  return record.dump();
}

Probe probe_from_json(std::string_view text) {
  try {
    const Json record = Json::parse(text);
    const Task task = parse_task(field(record, "task").get<std::string>());
    const auto k = field(record, "k").get<std::int64_t>();
    const auto m = field(record, "m").get<std::int64_t>();
    if (k < 1 || m < 1) throw ValidationError("probe k and m must be >= 1");
    const auto blob = detail::base64_decode(field(record, "B").get<std::string>());
    if (blob.size() != static_cast<std::size_t>(k * m * 8))
      throw DataError(fmt::format("probe matrix blob is {} bytes, expected {}",
                                  blob.size(), k * m * 8));
    const std::vector<double> flat = detail::unpack_f64le(blob);
    Eigen::MatrixXd b(k, m);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        b(i, j) = flat[static_cast<std::size_t>(i * m + j)];

    ProbeMeta meta;
    if (const auto it = record.find("meta"); it != record.end()) {
      meta.layer = it->value("layer", std::string{});
      meta.seed = it->value("seed", std::uint64_t{0});
      meta.epochs_run = it->value("epochs_run", std::size_t{0});
      if (const auto loss = it->find("best_val_loss");
          loss != it->end() && !loss->is_null())
        meta.best_val_loss = loss->get<double>();
    }
    return Probe(task, std::move(b), std::move(meta));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("bad probe file: {}", e.what()));
  }
}

void write_probe(const Probe& probe, const std::filesystem::path& path) {
  write_file_atomic(path, probe_to_json(probe) + "\n");
}

Probe read_probe(const std::filesystem::path& path) {
  return probe_from_json(read_text_file(path));
}

}  // namespace structprobe
