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

#ifndef STRUCTPROBE_FILE_UTIL_HPP
#define STRUCTPROBE_FILE_UTIL_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace structprobe {

// Whole-file read; throws DataError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// Writes `content` to a sibling temporary file and renames it over `path`,
// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace structprobe

#endif  // STRUCTPROBE_FILE_UTIL_HPP
