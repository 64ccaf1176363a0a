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

#ifndef STRUCTPROBE_EMBEDDINGS_HPP
#define STRUCTPROBE_EMBEDDINGS_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace structprobe {

/// Embeddings for the n nodes of one sequence, one row per node.
///
/// Values are stored on disk as float32 and held here widened to double.
/// Writing narrows them back to float32, so sequences that came from a
/// file round-trip bit-exactly.
struct EmbeddingSequence {
  std::string id;
  int layer = 0;
  Eigen::MatrixXd values;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(values.rows());
  }
  std::size_t width() const noexcept {
    return static_cast<std::size_t>(values.cols());
  }
};

/// Word-to-wordpiece grouping for one sequence. groups[w] lists the
/// wordpiece rows that make up word w.
struct AlignmentMap {
  std::string id;
  std::vector<std::vector<std::size_t>> groups;
};

// EMB-JSONL: one record per sequence,
//   {"id": str, "layer": int, "n": int, "m": int, "dtype": "f32le",
//    "data": "<base64 of n*m*4 bytes, row-major>"}
std::string embedding_to_json(const EmbeddingSequence& seq);
// Throws DataError naming the record id for payload problems.
EmbeddingSequence embedding_from_json(std::string_view line);

// Streams records from an EMB-JSONL file one at a time.
class EmbeddingReader {
 public:
  explicit EmbeddingReader(const std::filesystem::path& path);

  std::optional<EmbeddingSequence> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

std::vector<EmbeddingSequence> read_embeddings(const std::filesystem::path& path);
std::vector<EmbeddingSequence> parse_embeddings_jsonl(std::string_view text);
std::string format_embeddings_jsonl(std::span<const EmbeddingSequence> seqs);
void write_embeddings(std::span<const EmbeddingSequence> seqs,
                      const std::filesystem::path& path);

// Alignment JSON Lines: {"id": str, "groups": [[int]]}
std::vector<AlignmentMap> parse_alignments_jsonl(std::string_view text);
std::vector<AlignmentMap> read_alignments(const std::filesystem::path& path);

// One row per word: the mean of that word's wordpiece rows. Throws
// ValidationError unless the groups partition the rows with ascending
// indices inside each group.
EmbeddingSequence align_wordpieces(const EmbeddingSequence& seq,
                                   const AlignmentMap& map);

}  // namespace structprobe

#endif  // STRUCTPROBE_EMBEDDINGS_HPP
