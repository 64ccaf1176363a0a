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

#include "structprobe/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

class Stepper {
 public:
  Stepper(StepRule rule, double lr, Eigen::Index rows, Eigen::Index cols)
      : rule_(rule),
        lr_(lr),
        first_(Eigen::MatrixXd::Zero(rows, cols)),
        second_(Eigen::MatrixXd::Zero(rows, cols)) {}

  void step(Eigen::MatrixXd& params, const Eigen::MatrixXd& grad) {
    if (rule_ == StepRule::kSgd) {
      params -= lr_ * grad;
      return;
    }
    ++t_;
    first_ = kBeta1 * first_ + (1.0 - kBeta1) * grad;
    second_ = kBeta2 * second_ + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    params.array() -= lr_ * (first_.array() / c1) /
                      ((second_.array() / c2).sqrt() + kEpsilon);
  }

 private:
  StepRule rule_;
  double lr_;
  Eigen::MatrixXd first_;
  Eigen::MatrixXd second_;
  std::int64_t t_ = 0;
};

void check_dataset(const Dataset& data, const char* name) {
  if (data.size() == 0) throw ValidationError(fmt::format("{} dataset is empty", name));
  if (data.embeddings.size() != data.labels.size())
    throw ValidationError(fmt::format("{} dataset is not paired", name));
}

}  // namespace

std::string_view to_string(StepRule rule) noexcept {
  return rule == StepRule::kAdam ? "adam" : "sgd";
}

StepRule parse_step_rule(std::string_view name) {
  if (name == "adam") return StepRule::kAdam;
  if (name == "sgd") return StepRule::kSgd;
  throw ValidationError(fmt::format("unknown step rule '{}'", name));
}

void validate(const TrainConfig& config) {
  if (config.batch_size == 0) throw ValidationError("batch size must be positive");
  if (config.max_epochs == 0) throw ValidationError("max epochs must be positive");
  if (config.patience == 0) throw ValidationError("patience must be positive");
  if (config.rank == 0) throw ValidationError("probe rank must be positive");
  if (config.patience > config.max_epochs)
    throw ValidationError("patience must not exceed max epochs");
  if (!std::isfinite(config.learning_rate) || config.learning_rate < 0.0)
    throw ValidationError("learning rate must be finite and non-negative");
}

Eigen::MatrixXd initial_transform(std::size_t rank, std::size_t width,
                                  std::uint64_t seed) {
  const double scale = std::sqrt(6.0 / static_cast<double>(rank + width));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-scale, scale);
  Eigen::MatrixXd b(static_cast<Eigen::Index>(rank), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = uniform(rng);
  return b;
}

TrainResult train_probe(Task task, const Dataset& train, const Dataset& val,
                        const TrainConfig& config, std::string layer) {
  validate(config);
  check_dataset(train, "training");
  check_dataset(val, "validation");
  if (train.width() != val.width())
    throw ValidationError(fmt::format("training width {} differs from validation width {}",
                                      train.width(), val.width()));

  Eigen::MatrixXd params = initial_transform(config.rank, train.width(), config.seed);
  Eigen::MatrixXd best = params;
  Stepper stepper(config.step_rule, config.learning_rate, params.rows(), params.cols());
  // Shuffling uses its own stream so the initialisation does not depend on
  // the dataset size.
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainHistory history;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      const double loss = batch_loss(task, params, train, batch);
      if (!std::isfinite(loss))
        throw DivergenceError(fmt::format(
            "training loss became non-finite in epoch {} (batch starting at {})",
            epoch, start));
      epoch_loss += loss;
      ++batches;
      stepper.step(params, loss_gradient(task, params, train, batch));
    }
    history.train_loss.push_back(epoch_loss / static_cast<double>(batches));

    const double val_loss = dataset_loss(task, params, val);
    if (!std::isfinite(val_loss))
      throw DivergenceError(
          fmt::format("validation loss became non-finite in epoch {}", epoch));
    history.val_loss.push_back(val_loss);
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best = params;
      history.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }

  ProbeMeta meta{std::move(layer), config.seed, history.val_loss.size(), best_loss};
  return TrainResult{Probe(task, std::move(best), std::move(meta)), std::move(history)};
}

std::vector<SweepRow> sweep_ranks(std::span<const std::size_t> ranks, Task task,
                                  const Dataset& train, const Dataset& val,
                                  const TrainConfig& config,
                                  const EvalOptions& options, std::string layer) {
  std::vector<SweepRow> rows;
  rows.reserve(ranks.size());
  for (std::size_t rank : ranks) {
    TrainConfig cfg = config;
    cfg.rank = rank;
    TrainResult result = train_probe(task, train, val, cfg, layer);
    SweepRow row;
    row.rank = rank;
    row.best_val_loss = result.probe.meta().best_val_loss.value_or(0.0);
    row.epochs_run = result.probe.meta().epochs_run;
    row.report = evaluate(result.probe, val, options, layer);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace structprobe
