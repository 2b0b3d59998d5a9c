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

#include "multimark/prf.h"

#include <openssl/evp.h>

#include <cstring>
#include <numeric>
#include <utility>

#include "multimark/error.h"

namespace multimark {
namespace {

EVP_MD_CTX* Ctx(void* p) { return static_cast<EVP_MD_CTX*>(p); }

void CheckOk(int rc) {
  if (rc != 1) throw Error("crypto", "SHA-256 operation failed");
}

}  // namespace

Digest Sha256(std::span<const std::uint8_t> data) {
  Digest out;
  unsigned int len = 0;
  CheckOk(EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                     nullptr));
  return out;
}

Sha256Builder::Sha256Builder() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr) throw Error("crypto", "EVP_MD_CTX_new failed");
  CheckOk(EVP_DigestInit_ex(Ctx(ctx_), EVP_sha256(), nullptr));
}

Sha256Builder::~Sha256Builder() { EVP_MD_CTX_free(Ctx(ctx_)); }

Sha256Builder& Sha256Builder::Add(std::span<const std::uint8_t> data) {
  CheckOk(EVP_DigestUpdate(Ctx(ctx_), data.data(), data.size()));
  return *this;
}

Sha256Builder& Sha256Builder::Add(std::string_view text) {
  CheckOk(EVP_DigestUpdate(Ctx(ctx_), text.data(), text.size()));
  return *this;
}

Sha256Builder& Sha256Builder::AddU32(std::uint32_t value) {
  const std::uint8_t be[4] = {
      static_cast<std::uint8_t>(value >> 24),
      static_cast<std::uint8_t>(value >> 16),
      static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)};
  return Add(std::span<const std::uint8_t>(be, 4));
}

Sha256Builder& Sha256Builder::AddU64(std::uint64_t value) {
  std::uint8_t be[8];
  for (int i = 0; i < 8; ++i) {
    be[i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
  }
  return Add(std::span<const std::uint8_t>(be, 8));
}

Digest Sha256Builder::Finish() {
  Digest out;
  unsigned int len = 0;
  CheckOk(EVP_DigestFinal_ex(Ctx(ctx_), out.data(), &len));
  CheckOk(EVP_DigestInit_ex(Ctx(ctx_), EVP_sha256(), nullptr));
  return out;
}

HashDrbg::HashDrbg(const Digest& seed) : seed_(seed) {}

void HashDrbg::Refill() {
  std::uint8_t input[sizeof(Digest) + 8];
  std::memcpy(input, seed_.data(), seed_.size());
  for (int i = 0; i < 8; ++i) {
    input[seed_.size() + i] =
        static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
  }
  ++counter_;
  block_ = Sha256(input);
  offset_ = 0;
}

std::uint32_t HashDrbg::NextU32() {
  if (offset_ + 4 > block_.size()) Refill();
  const std::uint8_t* p = block_.data() + offset_;
  offset_ += 4;
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::uint64_t HashDrbg::NextU64() {
  const std::uint64_t hi = NextU32();
  return (hi << 32) | NextU32();
}

std::uint32_t HashDrbg::Uniform(std::uint32_t n) {
  if (n == 0) throw ConfigError("uniform draw over an empty range");
  // Largest multiple of n that fits in 2^32.
  const std::uint64_t limit =
      (std::uint64_t{1} << 32) - ((std::uint64_t{1} << 32) % n);
  for (;;) {
    const std::uint32_t x = NextU32();
    if (x < limit) return x % n;
  }
}

double HashDrbg::NextDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::size_t TextureKeyHash::operator()(const TextureKey& key) const {
  std::size_t h;
  std::memcpy(&h, key.digest.data(), sizeof(h));
  return h;
}

Permutation::Permutation(std::vector<TokenId> order)
    : order_(std::move(order)) {}

Permutation Permutation::Identity(std::size_t size) {
  std::vector<TokenId> order(size);
  std::iota(order.begin(), order.end(), TokenId{0});
  return Permutation(std::move(order));
}

std::size_t Permutation::RankOf(TokenId token) const {
  for (std::size_t r = 0; r < order_.size(); ++r) {
    if (order_[r] == token) return r;
  }
  return order_.size();
}

TextureKey DeriveTextureKey(std::span<const TokenId> context, std::size_t h) {
  if (h == 0) throw ConfigError("texture window h must be positive");
  if (context.size() < h) throw InsufficientContextError(context.size(), h);
  std::vector<std::uint8_t> encoded;
  encoded.reserve(4 * h);
  for (TokenId t : context.subspan(context.size() - h)) {
    encoded.push_back(static_cast<std::uint8_t>(t >> 24));
    encoded.push_back(static_cast<std::uint8_t>(t >> 16));
    encoded.push_back(static_cast<std::uint8_t>(t >> 8));
    encoded.push_back(static_cast<std::uint8_t>(t));
  }
  return TextureKey{Sha256(encoded)};
}

Digest StreamSeed(const WatermarkKey& key, const TextureKey& texture,
                  std::string_view tag) {
  Sha256Builder b;
  b.Add(key.bytes()).Add(texture.digest).Add(tag);
  return b.Finish();
}

Permutation GeneratePermutation(const WatermarkKey& key,
                                const TextureKey& texture,
                                std::size_t vocab_size) {
  if (vocab_size < 2) throw ConfigError("vocabulary must have >= 2 tokens");
  HashDrbg rng(StreamSeed(key, texture, kPermutationTag));
  std::vector<TokenId> order(vocab_size);
  std::iota(order.begin(), order.end(), TokenId{0});
  for (std::size_t i = vocab_size - 1; i > 0; --i) {
    const std::uint32_t j = rng.Uniform(static_cast<std::uint32_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return Permutation(std::move(order));
}

std::uint32_t AllocatePosition(const WatermarkKey& key,
                               const TextureKey& texture,
                               std::uint32_t chunks) {
  if (chunks == 0) throw ConfigError("chunk count H must be positive");
  if (chunks == 1) return 0;
  HashDrbg rng(StreamSeed(key, texture, kPositionTag));
  return rng.Uniform(chunks);
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace multimark
