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

// Base64 (standard alphabet, padded) over libsodium. Not installed.

#ifndef STRUCTPROBE_SRC_BASE64_HPP
#define STRUCTPROBE_SRC_BASE64_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace structprobe::detail {

std::string base64_encode(std::span<const unsigned char> bytes);

// Throws DataError on characters outside the alphabet or bad padding.
std::vector<unsigned char> base64_decode(std::string_view text);

// Little-endian packing of IEEE-754 values.
std::vector<unsigned char> pack_f32le(std::span<const float> values);
std::vector<float> unpack_f32le(std::span<const unsigned char> bytes);
std::vector<unsigned char> pack_f64le(std::span<const double> values);
std::vector<double> unpack_f64le(std::span<const unsigned char> bytes);

}  // namespace structprobe::detail

#endif  // STRUCTPROBE_SRC_BASE64_HPP
