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

#include "structprobe/conll.hpp"

#include <charconv>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "structprobe/error.hpp"
#include "structprobe/file_util.hpp"

namespace structprobe {

namespace {

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return cols;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    cols.push_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

struct Block {
  std::string id;
  std::size_t first_line = 0;
  std::vector<std::string> forms;
  std::vector<std::size_t> heads;
  std::vector<std::string> deprels;
  bool has_deprels = true;
};

}  // namespace

std::vector<DepTree> parse_conllu(std::string_view text) {
  std::vector<DepTree> trees;
  Block block;
  std::string pending_id;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (block.forms.empty()) return;
    std::string id = !block.id.empty() ? block.id : std::to_string(trees.size() + 1);
    std::vector<std::string> deprels;
    if (block.has_deprels) deprels = std::move(block.deprels);
    try {
      trees.emplace_back(std::move(block.forms), std::move(block.heads),
                         std::move(deprels), std::move(id));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{} (block starting at line {})",
                                        e.what(), block.first_line));
    }
    block = Block{};
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;

    if (line.empty()) {
      flush();
      pending_id.clear();
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view key = "sent_id";
      std::string_view body = trim(line.substr(1));
      if (body.substr(0, key.size()) == key) {
        body = trim(body.substr(key.size()));
        if (!body.empty() && body.front() == '=') body = trim(body.substr(1));
        pending_id = std::string(body);
      }
      continue;
    }

    const auto cols = split_columns(line);
    std::size_t head_col = 0;
    std::optional<std::size_t> rel_col;
    if (cols.size() >= 10) {
      head_col = 6;
      rel_col = 7;
    } else if (cols.size() == 4) {
      head_col = 2;
      rel_col = 3;
    } else if (cols.size() == 3) {
      head_col = 2;
    } else {
      throw ParseError(
          fmt::format("expected 3, 4 or 10 columns, found {}", cols.size()),
          line_no);
    }

    const std::string_view id_field = cols[0];
    if (id_field.find_first_of("-.") != std::string_view::npos) continue;
    const auto token_id = to_index(id_field);
    if (!token_id || *token_id == 0)
      throw ParseError(fmt::format("bad token id '{}'", id_field), line_no);

    if (block.forms.empty()) {
      block.first_line = line_no;
      block.id = pending_id;
    }
    if (*token_id != block.forms.size() + 1)
      throw ParseError(fmt::format("token id {} out of sequence (expected {})",
                                   *token_id, block.forms.size() + 1),
                       line_no);
    const auto head = to_index(cols[head_col]);
    if (!head)
      throw ParseError(fmt::format("bad head '{}'", cols[head_col]), line_no);

    block.forms.emplace_back(cols[1]);
    block.heads.push_back(*head == 0 ? kRootHead : *head - 1);
    if (rel_col)
      block.deprels.emplace_back(cols[*rel_col]);
    else
      block.has_deprels = false;
  }
  flush();
  return trees;
}

std::vector<DepTree> read_conllu_file(const std::filesystem::path& path) {
  return parse_conllu(read_text_file(path));
}

}  // namespace structprobe
