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

#ifndef STRUCTPROBE_DATASET_HPP
#define STRUCTPROBE_DATASET_HPP

#include <vector>

#include "structprobe/dep_tree.hpp"
#include "structprobe/embeddings.hpp"

namespace structprobe {

/// Gold labels paired index-wise with the embeddings of the same sequence.
/// Every embedding has the same width.
struct Dataset {
  std::vector<TreeLabels> labels;
  std::vector<EmbeddingSequence> embeddings;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t width() const noexcept {
    return embeddings.empty() ? 0 : embeddings.front().width();
  }
};

// Pairs records by id; the result follows the order of `labels`.
// Throws ValidationError for ids present on one side only, duplicate ids,
// node-count mismatches and mixed embedding widths.
Dataset make_dataset(std::vector<TreeLabels> labels,
                     std::vector<EmbeddingSequence> embeddings);

}  // namespace structprobe

#endif  // STRUCTPROBE_DATASET_HPP
