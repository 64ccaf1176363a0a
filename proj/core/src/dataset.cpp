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

#include "structprobe/dataset.hpp"

#include <unordered_map>

#include <fmt/core.h>

#include "structprobe/error.hpp"

namespace structprobe {

Dataset make_dataset(std::vector<TreeLabels> labels,
                     std::vector<EmbeddingSequence> embeddings) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    if (!by_id.emplace(embeddings[i].id, i).second)
      throw ValidationError(
          fmt::format("duplicate embedding id '{}'", embeddings[i].id));
  if (labels.size() != embeddings.size())
    throw ValidationError(fmt::format("{} label records but {} embedding records",
                                      labels.size(), embeddings.size()));

  Dataset out;
  out.embeddings.reserve(labels.size());
  std::vector<bool> used(embeddings.size(), false);
  for (const auto& l : labels) {
    const auto it = by_id.find(l.id);
    if (it == by_id.end())
      throw ValidationError(fmt::format("no embeddings for sequence '{}'", l.id));
    if (used[it->second])
      throw ValidationError(fmt::format("duplicate label id '{}'", l.id));
    used[it->second] = true;
    EmbeddingSequence& seq = embeddings[it->second];
    if (seq.size() != l.size())
      throw ValidationError(fmt::format("sequence '{}': {} labelled nodes but {} embedding rows",
                                        l.id, l.size(), seq.size()));
    if (!out.embeddings.empty() && seq.width() != out.embeddings.front().width())
      throw ValidationError(fmt::format("sequence '{}': width {} differs from {}",
                                        l.id, seq.width(),
                                        out.embeddings.front().width()));
    out.embeddings.push_back(std::move(seq));
  }
  out.labels = std::move(labels);
  return out;
}

}  // namespace structprobe
