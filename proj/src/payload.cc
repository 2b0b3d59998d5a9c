// Copyright 2026 The Multimark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "multimark/payload.h"

#include "multimark/error.h"

namespace multimark {
namespace {

void CheckWidth(int bits, const char* name) {
  if (bits < 0 || bits > 64) {
    throw ConfigError(std::string(name) + " width must be in [0, 64]");
  }
}

void AppendMsbFirst(std::vector<bool>& out, std::uint64_t value, int bits) {
  for (int i = bits - 1; i >= 0; --i) out.push_back(((value >> i) & 1u) != 0);
}

std::uint64_t ReadMsbFirst(const std::vector<bool>& bits, std::size_t& at,
                           int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | (bits[at++] ? 1u : 0u);
  return v;
}

}  // namespace

std::string MessagePayload::ToBits() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(total_bits()));
  for (std::uint32_t c : chunks) {
    for (int i = m - 1; i >= 0; --i) out.push_back(((c >> i) & 1u) ? '1' : '0');
  }
  for (int i = key_bit_count - 1; i >= 0; --i) {
    out.push_back(((key_bits >> i) & 1u) ? '1' : '0');
  }
  return out;
}

MessagePayload MessagePayload::FromBits(std::string_view bits, int m, int H,
                                        int key_bit_count) {
  if (m < 1 || H < 1 || key_bit_count < 0) {
    throw FormatError("invalid payload shape");
  }
  const std::size_t expected =
      static_cast<std::size_t>(H) * m + static_cast<std::size_t>(key_bit_count);
  if (bits.size() != expected) {
    throw FormatError("payload has " + std::to_string(bits.size()) +
                      " bits, expected " + std::to_string(expected));
  }
  MessagePayload p;
  p.m = m;
  p.key_bit_count = key_bit_count;
  std::size_t at = 0;
  auto next = [&](int width) {
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) {
      const char c = bits[at++];
      if (c != '0' && c != '1') throw FormatError("payload bits must be 0/1");
      v = (v << 1) | (c == '1' ? 1u : 0u);
    }
    return v;
  };
  for (int j = 0; j < H; ++j) p.chunks.push_back(next(m));
  p.key_bits = next(key_bit_count);
  return p;
}

void MessagePayload::Validate() const {
  if (m < 1 || m > 24) throw ConfigError("bits per chunk m out of range");
  if (chunks.empty()) throw ConfigError("payload needs at least one chunk");
  for (std::uint32_t c : chunks) {
    if (c >= (std::uint32_t{1} << m)) {
      throw ConfigError("chunk value " + std::to_string(c) +
                        " does not fit in m bits");
    }
  }
  if (key_bit_count < 0 || key_bit_count > 16) {
    throw ConfigError("key iteration bits must be in [0, 16]");
  }
  if (key_bits >= (std::uint32_t{1} << key_bit_count)) {
    throw ConfigError("key bits exceed 2^m'");
  }
}

MessagePayload PackPayload(const Metadata& metadata, int m, int H) {
  CheckWidth(metadata.user_bits, "user id");
  CheckWidth(metadata.model_bits, "model id");
  CheckWidth(metadata.timestamp_bits, "timestamp");
  if (m < 1 || m > 24 || H < 1) throw ConfigError("invalid payload shape");
  const std::size_t capacity = static_cast<std::size_t>(H) * m;
  const std::size_t required = static_cast<std::size_t>(metadata.total_bits());
  if (required > capacity) throw CapacityError(required, capacity);

  std::vector<bool> bits;
  bits.reserve(capacity);
  for (int i = 0; i < metadata.timestamp_bits; ++i) {
    bits.push_back(((metadata.timestamp >> i) & 1u) != 0);
  }
  AppendMsbFirst(bits, metadata.user_id, metadata.user_bits);
  AppendMsbFirst(bits, metadata.model_id, metadata.model_bits);
  bits.resize(capacity, false);

  MessagePayload p;
  p.m = m;
  std::size_t at = 0;
  for (int j = 0; j < H; ++j) {
    p.chunks.push_back(static_cast<std::uint32_t>(ReadMsbFirst(bits, at, m)));
  }
  return p;
}

Metadata UnpackPayload(const MessagePayload& payload, const Metadata& layout) {
  std::vector<bool> bits;
  for (std::uint32_t c : payload.chunks) AppendMsbFirst(bits, c, payload.m);
  if (static_cast<std::size_t>(layout.total_bits()) > bits.size()) {
    throw CapacityError(static_cast<std::size_t>(layout.total_bits()),
                        bits.size());
  }
  Metadata out = layout;
  std::size_t at = 0;
  out.timestamp = 0;
  for (int i = 0; i < layout.timestamp_bits; ++i) {
    if (bits[at++]) out.timestamp |= std::uint64_t{1} << i;
  }
  out.user_id = ReadMsbFirst(bits, at, layout.user_bits);
  out.model_id = ReadMsbFirst(bits, at, layout.model_bits);
  return out;
}

double BitAccuracy(const MessagePayload& truth,
                   const MessagePayload& extracted) {
  const std::string a = truth.ToBits();
  const std::string b = extracted.ToBits();
  if (a.size() != b.size()) {
    throw InputError("payload shapes differ; cannot compare bits");
  }
  if (a.empty()) return 1.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += (a[i] == b[i]);
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace multimark
