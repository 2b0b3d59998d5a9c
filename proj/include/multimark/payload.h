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

#ifndef MULTIMARK_PAYLOAD_H_
#define MULTIMARK_PAYLOAD_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace multimark {

// Payload layout v1. The metadata is flattened into a bit string
//
//   [timestamp bits, least significant first]
//   [user id bits, most significant first]
//   [model id bits, most significant first]
//   [zero padding up to H * m]
//
// and cut into H chunks of m bits; each chunk is read as a big-endian
// unsigned integer. The fast-changing timestamp bits therefore land in the
// lowest chunk positions.
inline constexpr int kPayloadLayoutVersion = 1;

struct Metadata {
  std::uint64_t user_id = 0;
  int user_bits = 0;
  std::uint64_t model_id = 0;
  int model_bits = 0;
  std::uint64_t timestamp = 0;
  int timestamp_bits = 0;

  int total_bits() const { return user_bits + model_bits + timestamp_bits; }
  // Number of leading chunks that carry timestamp bits.
  int timestamp_chunks(int m) const { return (timestamp_bits + m - 1) / m; }
};

struct MessagePayload {
  int m = 1;
  std::vector<std::uint32_t> chunks;  // H values, each < 2^m
  int key_bit_count = 0;              // m'; zero disables key iteration
  std::uint32_t key_bits = 0;         // < 2^m'

  int H() const { return static_cast<int>(chunks.size()); }
  int total_bits() const { return H() * m + key_bit_count; }

  // Chunk bits (each chunk most significant bit first) followed by the key
  // bits, as a string of '0'/'1'.
  std::string ToBits() const;
  static MessagePayload FromBits(std::string_view bits, int m, int H,
                                 int key_bit_count);

  void Validate() const;

  friend bool operator==(const MessagePayload&,
                         const MessagePayload&) = default;
};

// Throws CapacityError when the metadata does not fit in H * m bits.
MessagePayload PackPayload(const Metadata& metadata, int m, int H);

// Inverse of PackPayload for the field widths given in `layout`.
Metadata UnpackPayload(const MessagePayload& payload, const Metadata& layout);

// Fraction of matching bits over ToBits() of both payloads.
double BitAccuracy(const MessagePayload& truth,
                   const MessagePayload& extracted);

}  // namespace multimark

#endif  // MULTIMARK_PAYLOAD_H_
