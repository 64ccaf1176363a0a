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

#include "base64.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <mutex>

#include <sodium.h>

#include "structprobe/error.hpp"

namespace structprobe::detail {

namespace {

constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw DataError("libsodium failed to initialise");
  });
}

template <typename Word, typename Value>
std::vector<unsigned char> pack(std::span<const Value> values) {
  std::vector<unsigned char> out(values.size() * sizeof(Value));
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto word = std::bit_cast<Word>(values[i]);
    for (std::size_t b = 0; b < sizeof(Word); ++b) {
      out[i * sizeof(Word) + b] = static_cast<unsigned char>(word & 0xFFu);
      word >>= 8;
    }
  }
  return out;
}

template <typename Word, typename Value>
std::vector<Value> unpack(std::span<const unsigned char> bytes) {
  std::vector<Value> out(bytes.size() / sizeof(Word));
  for (std::size_t i = 0; i < out.size(); ++i) {
    Word word = 0;
    for (std::size_t b = sizeof(Word); b-- > 0;)
      word = static_cast<Word>((word << 8) | bytes[i * sizeof(Word) + b]);
    out[i] = std::bit_cast<Value>(word);
  }
  return out;
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  ensure_sodium();
  std::string out(sodium_base64_encoded_len(bytes.size(), kVariant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
  out.pop_back();  // terminating NUL
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  ensure_sodium();
  std::vector<unsigned char> out(text.size() / 4 * 3 + 3);
  std::size_t length = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &length, &end, kVariant) != 0 ||
      end != text.data() + text.size())
    throw DataError("invalid base64 payload");
  out.resize(length);
  return out;
}

std::vector<unsigned char> pack_f32le(std::span<const float> values) {
  return pack<std::uint32_t>(values);
}
std::vector<float> unpack_f32le(std::span<const unsigned char> bytes) {
  return unpack<std::uint32_t, float>(bytes);
}
std::vector<unsigned char> pack_f64le(std::span<const double> values) {
  return pack<std::uint64_t>(values);
}
std::vector<double> unpack_f64le(std::span<const unsigned char> bytes) {
  return unpack<std::uint64_t, double>(bytes);
}

}  // namespace structprobe::detail
