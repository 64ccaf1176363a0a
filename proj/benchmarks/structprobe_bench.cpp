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

#include <numeric>

#include <benchmark/benchmark.h>

#include "structprobe/metrics.hpp"
#include "structprobe/probe.hpp"
#include "structprobe/synth.hpp"
#include "structprobe/train.hpp"

namespace sp = structprobe;

namespace {

sp::Dataset oracle_batch(std::size_t n, std::size_t count) {
  sp::OracleConfig cfg;
  cfg.n_trees = count;
  cfg.min_n = n;
  cfg.max_n = n;
  cfg.extra_dims = 768 - (n - 1);
  cfg.noise_sigma = 0.1;
  return sp::make_oracle_dataset(cfg).dataset();
}

void BM_TreeDistances(benchmark::State& state) {
  const auto tree = sp::random_tree(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sp::tree_distances(tree));
}
BENCHMARK(BM_TreeDistances)->Arg(10)->Arg(50)->Arg(200);

void BM_PredictDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sp::Dataset data = oracle_batch(n, 1);
  const Eigen::MatrixXd b = sp::initial_transform(128, data.width(), 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sp::predict_distances(b, data.embeddings[0].values));
}
BENCHMARK(BM_PredictDistances)->Arg(10)->Arg(50);

void BM_LossGradient(benchmark::State& state) {
  const sp::Dataset data = oracle_batch(static_cast<std::size_t>(state.range(0)), 32);
  const Eigen::MatrixXd b = sp::initial_transform(128, data.width(), 0);
  std::vector<std::size_t> batch(data.size());
  std::iota(batch.begin(), batch.end(), std::size_t{0});
  const auto task = state.range(1) ? sp::Task::kDepth : sp::Task::kDistance;
  for (auto _ : state) benchmark::DoNotOptimize(sp::loss_gradient(task, b, data, batch));
}
BENCHMARK(BM_LossGradient)->Args({25, 0})->Args({25, 1})->Unit(benchmark::kMillisecond);

void BM_Uuas(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sp::TreeLabels gold = sp::make_labels(sp::random_tree(n, 3));
  const Eigen::MatrixXd pred = gold.distances.cast<double>();
  for (auto _ : state) benchmark::DoNotOptimize(sp::uuas(pred, gold));
}
BENCHMARK(BM_Uuas)->Arg(10)->Arg(50)->Arg(200);

void BM_DistanceSpearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sp::TreeLabels gold = sp::make_labels(sp::random_tree(n, 4));
  const Eigen::MatrixXd pred = gold.distances.cast<double>();
  for (auto _ : state) benchmark::DoNotOptimize(sp::distance_spearman(pred, gold.distances));
}
BENCHMARK(BM_DistanceSpearman)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
