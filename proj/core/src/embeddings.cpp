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

#include "structprobe/embeddings.hpp"

#include <cmath>

#include <fmt/core.h>

#include "base64.hpp"
#include "jsonl.hpp"
#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

using detail::field;
using detail::Json;

std::string embedding_to_json(const EmbeddingSequence& seq) {
  const auto n = seq.values.rows();
  const auto m = seq.values.cols();
  std::vector<float> row_major(static_cast<std::size_t>(n * m));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto v = static_cast<float>(seq.values(i, j));
      if (!std::isfinite(v))
        throw DataError(fmt::format("'{}': non-finite value at ({}, {})", seq.id, i, j));
      row_major[static_cast<std::size_t>(i * m + j)] = v;
    }
  }
  Json record;
  record["id"] = seq.id;
  record["layer"] = seq.layer;
  record["n"] = n;
  record["m"] = m;
  record["dtype"] = "f32le";
  record["data"] = detail::base64_encode(detail::pack_f32le(row_major));
  return record.dump();
}

namespace {

EmbeddingSequence embedding_from_record(const Json& record) {
  EmbeddingSequence seq;
  seq.id = field(record, "id").get<std::string>();
  auto fail = [&](const std::string& what) {
    return DataError(fmt::format("embedding '{}': {}", seq.id, what));
  };
  seq.layer = field(record, "layer").get<int>();
  const auto n = field(record, "n").get<std::int64_t>();
  const auto m = field(record, "m").get<std::int64_t>();
  if (n < 1 || m < 1) throw fail("n and m must be >= 1");
  if (const auto it = record.find("dtype");
      it != record.end() && it->get<std::string>() != "f32le")
    throw fail("unsupported dtype '" + it->get<std::string>() + "'");

  std::vector<unsigned char> blob;
  try {
    blob = detail::base64_decode(field(record, "data").get<std::string>());
  } catch (const DataError&) {
    throw fail("bad base64 payload");
  }
  const auto expected = static_cast<std::size_t>(n * m * 4);
  if (blob.size() != expected)
    throw fail(fmt::format("blob is {} bytes, expected n*m*4 = {}", blob.size(),
                           expected));
  const std::vector<float> flat = detail::unpack_f32le(blob);
  seq.values.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const float v = flat[static_cast<std::size_t>(i * m + j)];
      if (!std::isfinite(v))
        throw fail(fmt::format("non-finite value at ({}, {})", i, j));
      seq.values(i, j) = v;
    }
  }
  return seq;
}

}  // namespace

EmbeddingSequence embedding_from_json(std::string_view line) {
  std::vector<EmbeddingSequence> out = parse_embeddings_jsonl(line);
  if (out.size() != 1) throw ParseError("expected exactly one embedding record");
  return std::move(out.front());
}

EmbeddingReader::EmbeddingReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw DataError("cannot open " + path.string());
}

std::optional<EmbeddingSequence> EmbeddingReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      return embedding_from_record(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("{}: {}", path_.string(), e.what()), line_);
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", path_.string(), e.what()), line_);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{} line {}: {}", path_.string(), line_, e.what()));
    }
  }
  return std::nullopt;
}

std::vector<EmbeddingSequence> read_embeddings(const std::filesystem::path& path) {
  EmbeddingReader reader(path);
  std::vector<EmbeddingSequence> out;
  while (auto seq = reader.next()) out.push_back(std::move(*seq));
  return out;
}

std::vector<EmbeddingSequence> parse_embeddings_jsonl(std::string_view text) {
  std::vector<EmbeddingSequence> out;
  detail::for_each_jsonl(text, [&](const Json& record, std::size_t line_no) {
    try {
      out.push_back(embedding_from_record(record));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
  });
  return out;
}

std::string format_embeddings_jsonl(std::span<const EmbeddingSequence> seqs) {
  std::string out;
  for (const auto& seq : seqs) {
    out += embedding_to_json(seq);
    out += '\n';
  }
  return out;
}

void write_embeddings(std::span<const EmbeddingSequence> seqs,
                      const std::filesystem::path& path) {
  write_file_atomic(path, format_embeddings_jsonl(seqs));
}

std::vector<AlignmentMap> parse_alignments_jsonl(std::string_view text) {
  std::vector<AlignmentMap> out;
  detail::for_each_jsonl(text, [&](const Json& record, std::size_t line_no) {
    try {
      AlignmentMap map;
      map.id = field(record, "id").get<std::string>();
      map.groups = field(record, "groups").get<std::vector<std::vector<std::size_t>>>();
      out.push_back(std::move(map));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return out;
}

std::vector<AlignmentMap> read_alignments(const std::filesystem::path& path) {
  return parse_alignments_jsonl(read_text_file(path));
}

EmbeddingSequence align_wordpieces(const EmbeddingSequence& seq,
                                   const AlignmentMap& map) {
  const std::size_t pieces = seq.size();
  auto fail = [&](const std::string& what) {
    return ValidationError(fmt::format("alignment '{}': {}", map.id, what));
  };
  if (map.groups.empty()) throw fail("no groups");
  std::vector<bool> covered(pieces, false);
  for (std::size_t w = 0; w < map.groups.size(); ++w) {
    const auto& group = map.groups[w];
    if (group.empty()) throw fail(fmt::format("group {} is empty", w));
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (group[k] >= pieces)
        throw fail(fmt::format("index {} out of range for {} rows", group[k], pieces));
      if (k > 0 && group[k] <= group[k - 1])
        throw fail(fmt::format("group {} is not strictly ascending", w));
      if (covered[group[k]])
        throw fail(fmt::format("row {} appears in two groups", group[k]));
      covered[group[k]] = true;
    }
  }
  for (std::size_t i = 0; i < pieces; ++i)
    if (!covered[i]) throw fail(fmt::format("row {} is not covered", i));

  EmbeddingSequence out;
  out.id = seq.id;
  out.layer = seq.layer;
  out.values.resize(static_cast<Eigen::Index>(map.groups.size()), seq.values.cols());
  for (std::size_t w = 0; w < map.groups.size(); ++w) {
    const auto& group = map.groups[w];
    // Start from the first row so singletons come through untouched (keeps -0.0).
    Eigen::RowVectorXd sum = seq.values.row(static_cast<Eigen::Index>(group[0]));
    for (std::size_t g = 1; g < group.size(); ++g)
      sum += seq.values.row(static_cast<Eigen::Index>(group[g]));
    if (group.size() > 1) sum /= static_cast<double>(group.size());
    out.values.row(static_cast<Eigen::Index>(w)) = sum;
  }
  return out;
}

}  // namespace structprobe
