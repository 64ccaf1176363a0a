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

#ifndef STRUCTPROBE_TRAIN_HPP
#define STRUCTPROBE_TRAIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "structprobe/dataset.hpp"
#include "structprobe/probe.hpp"
#include "structprobe/report.hpp"

namespace structprobe {

enum class StepRule {
  kAdam,  // per-parameter adaptive first-order steps
  kSgd,   // constant-step gradient descent
};

std::string_view to_string(StepRule rule) noexcept;
StepRule parse_step_rule(std::string_view name);

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 40;
  std::size_t patience = 5;
  std::size_t rank = 128;
  StepRule step_rule = StepRule::kAdam;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

// Throws ValidationError unless batch size, epochs, patience and rank are
// positive, patience <= max_epochs, and the learning rate is finite and
// non-negative.
void validate(const TrainConfig& config);

struct TrainHistory {
  std::vector<double> train_loss;  // mean batch loss per epoch
  std::vector<double> val_loss;    // validation loss after each epoch
  std::size_t best_epoch = 0;      // 1-based
};

struct TrainResult {
  Probe probe;
  TrainHistory history;
};

// Initial probe matrix: entries uniform in [-s, s], s = sqrt(6 / (k + m)).
Eigen::MatrixXd initial_transform(std::size_t rank, std::size_t width,
                                  std::uint64_t seed);

/// Mini-batch training of a k x m probe on the L1 objective.
///
/// Each epoch shuffles the training sequences with a generator seeded from
/// the config, steps once per batch, and then measures the validation
/// loss. Training stops after `patience` consecutive epochs without a
/// strictly lower validation loss, or after `max_epochs`. The returned
/// probe holds the parameters of the best validation epoch.
///
/// Throws ValidationError for empty datasets or mismatched widths and
/// DivergenceError when a loss becomes non-finite.
TrainResult train_probe(Task task, const Dataset& train, const Dataset& val,
                        const TrainConfig& config, std::string layer = {});

struct SweepRow {
  std::size_t rank = 0;
  double best_val_loss = 0.0;
  std::size_t epochs_run = 0;
  EvalReport report;
};

// One probe per rank, all with the config's seed, evaluated on `val`.
// Rows follow the order of `ranks`, duplicates included.
std::vector<SweepRow> sweep_ranks(std::span<const std::size_t> ranks, Task task,
                                  const Dataset& train, const Dataset& val,
                                  const TrainConfig& config,
                                  const EvalOptions& options = {},
                                  std::string layer = {});

}  // namespace structprobe

#endif  // STRUCTPROBE_TRAIN_HPP
