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

#include "structprobe/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

DepTree random_tree(std::size_t n, std::uint64_t seed, std::string id) {
  if (n == 0) throw ValidationError("random_tree: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> parent(n, kRootHead);
  for (std::size_t i = 1; i < n; ++i)
    parent[i] = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);

  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  std::shuffle(label.begin(), label.end(), rng);

  std::vector<std::size_t> heads(n);
  std::vector<std::string> tokens(n);
  for (std::size_t i = 0; i < n; ++i) {
    heads[label[i]] = parent[i] == kRootHead ? kRootHead : label[parent[i]];
    tokens[label[i]] = fmt::format("w{}", label[i]);
  }
  return DepTree(std::move(tokens), std::move(heads), {}, std::move(id));
}

EmbeddingSequence oracle_embed_tree(const DepTree& tree, std::size_t extra_dims,
                                    double noise_sigma, std::uint64_t seed) {
  const std::size_t n = tree.size();
  const std::size_t width = (n - 1) + extra_dims;

  std::vector<std::size_t> coordinate(n, 0);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!tree.is_root(i)) coordinate[i] = next++;

  EmbeddingSequence seq;
  seq.id = tree.id();
  seq.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t v = i; !tree.is_root(v); v = tree.head(v))
      seq.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(coordinate[v])) = 1.0;

  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (Eigen::Index i = 0; i < seq.values.rows(); ++i)
      for (Eigen::Index j = 0; j < seq.values.cols(); ++j)
        seq.values(i, j) = static_cast<float>(seq.values(i, j) + noise(rng));
  }
  return seq;
}

Dataset OracleDataset::dataset() const {
  Dataset out;
  out.labels = labels;
  out.embeddings = embeddings;
  return out;
}

OracleDataset make_oracle_dataset(const OracleConfig& config) {
  if (config.min_n == 0 || config.min_n > config.max_n)
    throw ValidationError("oracle tree sizes must satisfy 1 <= min_n <= max_n");
  if (config.noise_sigma < 0.0) throw ValidationError("noise must be non-negative");
  const std::size_t width = (config.max_n - 1) + config.extra_dims;
  if (width == 0)
    throw ValidationError("oracle embeddings need at least one dimension");

  OracleDataset out;
  out.noise_sigma = config.noise_sigma;
  std::mt19937_64 sizes(mix_seed(config.seed, 0));
  std::uniform_int_distribution<std::size_t> size_dist(config.min_n, config.max_n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    const std::size_t n = size_dist(sizes);
    DepTree tree = random_tree(n, mix_seed(config.seed, 2 * t + 1),
                               fmt::format("{}{}", config.id_prefix, t));
    EmbeddingSequence seq = oracle_embed_tree(tree, width - (n - 1), config.noise_sigma,
                                              mix_seed(config.seed, 2 * t + 2));
    out.labels.push_back(make_labels(tree));
    out.embeddings.push_back(std::move(seq));
    out.trees.push_back(std::move(tree));
  }
  return out;
}

}  // namespace structprobe
