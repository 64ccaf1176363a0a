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

#ifndef STRUCTPROBE_SYNTH_HPP
#define STRUCTPROBE_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "structprobe/dataset.hpp"
#include "structprobe/dep_tree.hpp"
#include "structprobe/embeddings.hpp"

namespace structprobe {

// Random tree on n tokens: token i > 0 attaches to a uniformly chosen
// earlier token, then the labels are uniformly permuted so the root can be
// any token. Deterministic for a given seed. Throws ValidationError for
// n == 0.
DepTree random_tree(std::size_t n, std::uint64_t seed, std::string id = {});

// Path-indicator embedding of `tree`: every non-root token owns one
// coordinate (in ascending token order), and a token's row is the sum of
// the coordinates on its path from the root, so the root row is zero.
// Squared row distances equal tree distances and squared row norms equal
// depths. `extra_dims` zero columns are appended, then i.i.d. Gaussian
// noise of scale `noise_sigma` is added to every entry. Values are rounded
// to float32 so the sequence survives a file round trip unchanged.
// Width is (n - 1) + extra_dims.
EmbeddingSequence oracle_embed_tree(const DepTree& tree, std::size_t extra_dims,
                                    double noise_sigma, std::uint64_t seed);

struct OracleConfig {
  std::size_t n_trees = 500;
  std::size_t min_n = 5;
  std::size_t max_n = 50;
  std::size_t extra_dims = 16;
  double noise_sigma = 0.0;
  std::uint64_t seed = 7;
  std::string id_prefix = "synth-";
};

struct OracleDataset {
  std::vector<DepTree> trees;
  std::vector<TreeLabels> labels;
  std::vector<EmbeddingSequence> embeddings;
  std::string construction = "path-indicator";
  double noise_sigma = 0.0;

  // Copies the labels and embeddings into a paired dataset.
  Dataset dataset() const;
};

// Trees of uniformly drawn size in [min_n, max_n]. Every sequence is
// padded to the common width (max_n - 1) + extra_dims.
OracleDataset make_oracle_dataset(const OracleConfig& config);

}  // namespace structprobe

#endif  // STRUCTPROBE_SYNTH_HPP
