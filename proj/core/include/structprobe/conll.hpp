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

#ifndef STRUCTPROBE_CONLL_HPP
#define STRUCTPROBE_CONLL_HPP

#include <filesystem>
#include <string_view>
#include <vector>

#include "structprobe/dep_tree.hpp"

namespace structprobe {

// Parses dependency trees from CoNLL-style text.
//
// Accepted line layouts (tab separated; whitespace separated when a line
// contains no tab):
//   10 columns  CoNLL-U / CoNLL-X: ID FORM LEMMA . . . HEAD DEPREL . .
//   4 columns   ID FORM HEAD DEPREL
//   3 columns   ID FORM HEAD
// Sentences are separated by blank lines. `#` lines are comments; a
// `# sent_id = X` comment names the following sentence, otherwise the
// sentence is named by its zero-based ordinal. Multiword ranges (`3-4`)
// and empty nodes (`3.1`) are skipped. HEAD 0 marks the root.
//
// Throws ParseError (with the line number) for malformed lines and
// ValidationError for sentences that are not trees.
std::vector<DepTree> parse_conllu(std::string_view text);

std::vector<DepTree> read_conllu_file(const std::filesystem::path& path);

}  // namespace structprobe

#endif  // STRUCTPROBE_CONLL_HPP
