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

// Deterministic pseudorandom machinery. Everything here is a format-defining
// constant: two implementations that agree on these definitions produce the
// same permutations, positions, and sampled tokens for the same key.
//
//   digest(x)            = SHA-256(x)
//   texture key          = SHA-256(be32(t_1) || ... || be32(t_h))
//   stream seed          = SHA-256(key || texture key || tag)
//   stream block j       = SHA-256(seed || be64(j)), j = 0, 1, ...
//   u32 draws            = consecutive big-endian 4-byte words of the blocks
//   uniform in [0, n)    = rejection of draws >= 2^32 - (2^32 mod n), then mod
//   permutation          = Fisher-Yates, i = n-1 .. 1, swap(order[i],
//                          order[uniform(i + 1)]), tag "perm"
//   position             = uniform(H) on the stream tagged "pos"

#ifndef MULTIMARK_PRF_H_
#define MULTIMARK_PRF_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multimark/key.h"
#include "multimark/types.h"

namespace multimark {

using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::span<const std::uint8_t> data);

// Incremental SHA-256.
class Sha256Builder {
 public:
  Sha256Builder();
  ~Sha256Builder();
  Sha256Builder(const Sha256Builder&) = delete;
  Sha256Builder& operator=(const Sha256Builder&) = delete;

  Sha256Builder& Add(std::span<const std::uint8_t> data);
  Sha256Builder& Add(std::string_view text);
  Sha256Builder& AddU32(std::uint32_t value);  // big-endian
  Sha256Builder& AddU64(std::uint64_t value);  // big-endian
  Digest Finish();

 private:
  void* ctx_;  // EVP_MD_CTX
};

// Hash-counter deterministic random bit generator.
class HashDrbg {
 public:
  explicit HashDrbg(const Digest& seed);

  std::uint32_t NextU32();
  std::uint64_t NextU64();
  // Uniform integer in [0, n) without modulo bias. n must be positive.
  std::uint32_t Uniform(std::uint32_t n);
  // Uniform double in [0, 1) with 53 random bits.
  double NextDouble();

 private:
  void Refill();

  Digest seed_;
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t offset_ = sizeof(Digest);
};

// Digest of the last h token ids of a generation context.
struct TextureKey {
  Digest digest{};

  friend bool operator==(const TextureKey&, const TextureKey&) = default;
};

struct TextureKeyHash {
  std::size_t operator()(const TextureKey& key) const;
};

// A PRF-derived ordering of the vocabulary. order()[rank] is the token id
// placed at that rank (ranks are 0-based).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<TokenId> order);

  static Permutation Identity(std::size_t size);

  std::size_t size() const { return order_.size(); }
  TokenId operator[](std::size_t rank) const { return order_[rank]; }
  const std::vector<TokenId>& order() const { return order_; }
  // Rank of `token`, or size() if absent. Linear scan.
  std::size_t RankOf(TokenId token) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<TokenId> order_;
};

inline constexpr std::string_view kPermutationTag = "perm";
inline constexpr std::string_view kPositionTag = "pos";

// Throws InsufficientContextError when context.size() < h.
TextureKey DeriveTextureKey(std::span<const TokenId> context, std::size_t h);

Digest StreamSeed(const WatermarkKey& key, const TextureKey& texture,
                  std::string_view tag);

Permutation GeneratePermutation(const WatermarkKey& key,
                                const TextureKey& texture,
                                std::size_t vocab_size);

std::uint32_t AllocatePosition(const WatermarkKey& key,
                               const TextureKey& texture, std::uint32_t chunks);

std::string ToHex(std::span<const std::uint8_t> bytes);

}  // namespace multimark

#endif  // MULTIMARK_PRF_H_
