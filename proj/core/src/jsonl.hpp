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

// JSON Lines helpers shared by the readers. Not installed.

#ifndef STRUCTPROBE_SRC_JSONL_HPP
#define STRUCTPROBE_SRC_JSONL_HPP

#include <string>
#include <string_view>

#include <fmt/core.h>
#include <json.hpp>

#include "structprobe/error.hpp"

namespace structprobe::detail {

using Json = nlohmann::ordered_json;

// Calls fn(json, line_no) for every non-blank line of `text`.
template <typename Fn>
void for_each_jsonl(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(fmt::format("invalid JSON: {}", e.what()), line_no);
    }
    try {
      fn(record, line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("bad record: {}", e.what()), line_no);
    }
  }
}

// Required field accessor with a readable error.
inline const Json& field(const Json& record, const char* key) {
  if (!record.is_object())
    throw ParseError("record is not a JSON object");
  const auto it = record.find(key);
  if (it == record.end())
    throw ParseError(fmt::format("missing field '{}'", key));
  return *it;
}

}  // namespace structprobe::detail

#endif  // STRUCTPROBE_SRC_JSONL_HPP
