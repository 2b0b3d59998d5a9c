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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "multimark/error.h"
#include "multimark/key.h"
#include "multimark/numerics.h"
#include "multimark/prf.h"
#include "multimark/sampling.h"

namespace multimark {
namespace {

std::vector<std::uint8_t> Bytes(std::string_view s) {
  return {s.begin(), s.end()};
}

// Vectors below were produced by a separate script built on hashlib.
TEST(Sha256, KnownAnswer) {
  EXPECT_EQ(ToHex(Sha256(Bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(ToHex(Sha256(Bytes(""))),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Sha256Builder, MatchesOneShotAndResets) {
  Sha256Builder b;
  const Digest d = b.Add("a").Add("bc").Finish();
  EXPECT_EQ(d, Sha256(Bytes("abc")));
  EXPECT_EQ(b.Add("abc").Finish(), d);
}

TEST(HashDrbg, KnownStream) {
  HashDrbg rng(Sha256(Bytes("abc")));
  const std::vector<std::uint32_t> want = {
      3014207447u, 1832739454u, 1133247844u, 365963711u,  1435857630u,
      1864765705u, 2602943797u, 4144127021u, 1843637074u, 3833414255u};
  for (std::uint32_t w : want) EXPECT_EQ(rng.NextU32(), w);
}

TEST(HashDrbg, UniformRejectsEmptyRange) {
  HashDrbg rng(Sha256(Bytes("x")));
  EXPECT_THROW(rng.Uniform(0), ConfigError);
  EXPECT_EQ(rng.Uniform(1), 0u);
}

TEST(HashDrbg, UniformIsUniform) {
  HashDrbg rng(Sha256(Bytes("uniform")));
  const std::uint32_t n = 7;
  std::vector<double> counts(n, 0.0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) counts[rng.Uniform(n)] += 1.0;
  std::vector<double> expected(n, draws / static_cast<double>(n));
  EXPECT_GT(ChiSquareGoodnessOfFit(counts, expected).p_value, 1e-4);
}

TEST(HashDrbg, DoublesInUnitInterval) {
  HashDrbg rng(Sha256(Bytes("d")));
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.NextDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(WatermarkKey, LabelDerivationKnownAnswer) {
  const WatermarkKey key = WatermarkKey::FromLabel("oracle");
  EXPECT_EQ(key.size(), 128u);
  EXPECT_EQ(key.ToHex().substr(0, 32), "8aa4615074369a88c7beceee471ea68f");
}

TEST(WatermarkKey, RejectsShortKeys) {
  EXPECT_THROW(WatermarkKey(std::vector<std::uint8_t>(127, 1)), ConfigError);
  EXPECT_NO_THROW(WatermarkKey(std::vector<std::uint8_t>(128, 1)));
}

TEST(WatermarkKey, HexRoundTripAndParsing) {
  const WatermarkKey key = WatermarkKey::FromLabel("hex");
  EXPECT_EQ(WatermarkKey::FromHex(key.ToHex()), key);
  std::string spaced = key.ToHex();
  spaced.insert(10, "\n  ");
  EXPECT_EQ(WatermarkKey::FromHex(spaced), key);
  EXPECT_THROW(WatermarkKey::FromHex(key.ToHex() + "z"), FormatError);
  EXPECT_THROW(WatermarkKey::FromHex(key.ToHex() + "a"), FormatError);
}

TEST(WatermarkKey, RandomKeysDiffer) {
  EXPECT_NE(WatermarkKey::Random(), WatermarkKey::Random());
}

TEST(WatermarkKey, LoadsHexAndBinaryFiles) {
  const WatermarkKey key = WatermarkKey::FromLabel("file");
  const std::string hex_path = testing::TempDir() + "/key.hex";
  const std::string bin_path = testing::TempDir() + "/key.bin";
  {
    std::ofstream(hex_path) << key.ToHex() << "\n";
    std::ofstream bin(bin_path, std::ios::binary);
    // Leading byte 0xff guarantees the content is not hex text.
    std::vector<std::uint8_t> raw(key.bytes().begin(), key.bytes().end());
    raw[0] = 0xff;
    bin.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
  }
  EXPECT_EQ(WatermarkKey::LoadFile(hex_path), key);
  EXPECT_EQ(WatermarkKey::LoadFile(bin_path).bytes()[0], 0xff);
  EXPECT_THROW(WatermarkKey::LoadFile(hex_path + ".missing"), InputError);
}

TEST(WatermarkKey, LoadsKeySets) {
  const std::string path = testing::TempDir() + "/keys.txt";
  {
    std::ofstream out(path);
    out << WatermarkKey::FromLabel("a").ToHex() << "\n\n"
        << WatermarkKey::FromLabel("b").ToHex() << "\n";
  }
  const std::vector<WatermarkKey> set = LoadKeySet(path);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[1], WatermarkKey::FromLabel("b"));
}

TEST(TextureKey, KnownAnswerAndWindow) {
  const std::vector<TokenId> ctx = {1, 2, 3};
  EXPECT_EQ(ToHex(DeriveTextureKey(ctx, 3).digest),
            "7b0b5ea3ff36958c8e32ccf24b71da9ac68e51d0881bf75e62b837ec9ea6f3a5");
  const std::vector<TokenId> longer = {9, 9, 1, 2, 3};
  EXPECT_EQ(DeriveTextureKey(longer, 3), DeriveTextureKey(ctx, 3));
  EXPECT_NE(DeriveTextureKey(longer, 4), DeriveTextureKey(ctx, 3));
}

TEST(TextureKey, RejectsShortContext) {
  const std::vector<TokenId> ctx = {1, 2};
  EXPECT_THROW(DeriveTextureKey(ctx, 3), InsufficientContextError);
  EXPECT_THROW(DeriveTextureKey(ctx, 0), ConfigError);
  try {
    DeriveTextureKey(ctx, 3);
  } catch (const InsufficientContextError& e) {
    EXPECT_EQ(e.have(), 2u);
    EXPECT_EQ(e.need(), 3u);
  }
}

TEST(Permutation, KnownAnswer) {
  const WatermarkKey key = WatermarkKey::FromLabel("oracle");
  const std::vector<TokenId> ctx = {1, 2, 3};
  const TextureKey tex = DeriveTextureKey(ctx, 3);
  const std::vector<TokenId> want = {6,  13, 0, 9, 10, 12, 3, 14,
                                     7,  2,  8, 1, 15, 5,  4, 11};
  EXPECT_EQ(GeneratePermutation(key, tex, 16).order(), want);
  EXPECT_EQ(AllocatePosition(key, tex, 24), 19u);
  EXPECT_EQ(AllocatePosition(key, tex, 1), 0u);
}

TEST(Permutation, IsBijectionForManyInputs) {
  const WatermarkKey key = WatermarkKey::FromLabel("bijection");
  for (std::size_t V : {2u, 3u, 17u, 256u, 1000u}) {
    for (TokenId t = 0; t < 20; ++t) {
      const std::vector<TokenId> ctx = {t};
      const Permutation p = GeneratePermutation(key, DeriveTextureKey(ctx, 1), V);
      ASSERT_EQ(p.size(), V);
      std::vector<TokenId> sorted = p.order();
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < V; ++i) ASSERT_EQ(sorted[i], i);
      for (std::size_t r = 0; r < V; r += 7) EXPECT_EQ(p.RankOf(p[r]), r);
    }
  }
}

TEST(Permutation, DependsOnKeyAndTexture) {
  const std::vector<TokenId> a = {1}, b = {2};
  const WatermarkKey k1 = WatermarkKey::FromLabel("k1");
  const WatermarkKey k2 = WatermarkKey::FromLabel("k2");
  const TextureKey ta = DeriveTextureKey(a, 1);
  const TextureKey tb = DeriveTextureKey(b, 1);
  EXPECT_NE(GeneratePermutation(k1, ta, 64), GeneratePermutation(k2, ta, 64));
  EXPECT_NE(GeneratePermutation(k1, ta, 64), GeneratePermutation(k1, tb, 64));
  EXPECT_EQ(GeneratePermutation(k1, ta, 64), GeneratePermutation(k1, ta, 64));
  EXPECT_THROW(GeneratePermutation(k1, ta, 1), ConfigError);
}

TEST(Permutation, FirstRankIsUniformAcrossTextures) {
  const WatermarkKey key = WatermarkKey::FromLabel("uniform-rank");
  const std::size_t V = 8;
  std::vector<double> counts(V, 0.0);
  const int n = 16000;
  for (int i = 0; i < n; ++i) {
    const std::vector<TokenId> ctx = {static_cast<TokenId>(i)};
    counts[GeneratePermutation(key, DeriveTextureKey(ctx, 1), V)[0]] += 1.0;
  }
  std::vector<double> expected(V, n / static_cast<double>(V));
  EXPECT_GT(ChiSquareGoodnessOfFit(counts, expected).p_value, 1e-4);
}

TEST(Position, UniformOverChunks) {
  const WatermarkKey key = WatermarkKey::FromLabel("pos");
  const std::uint32_t H = 24;
  std::vector<double> counts(H, 0.0);
  const int n = 24000;
  for (int i = 0; i < n; ++i) {
    const std::vector<TokenId> ctx = {static_cast<TokenId>(i)};
    counts[AllocatePosition(key, DeriveTextureKey(ctx, 1), H)] += 1.0;
  }
  std::vector<double> expected(H, n / static_cast<double>(H));
  EXPECT_GT(ChiSquareGoodnessOfFit(counts, expected).p_value, 1e-4);
}

TEST(Sampling, StepSeedKnownAnswer) {
  HashDrbg rng(StepSeed("run", 0));
  EXPECT_DOUBLE_EQ(rng.NextDouble(), 0.09104101899410622);
}

TEST(Sampling, InverseCdf) {
  const TokenDistribution d({0.0, 0.25, 0.0, 0.75});
  EXPECT_EQ(SampleToken(d, 0.0), 1u);
  EXPECT_EQ(SampleToken(d, 0.2499), 1u);
  EXPECT_EQ(SampleToken(d, 0.25), 3u);
  EXPECT_EQ(SampleToken(d, 0.9999999999), 3u);
  // Zero-mass tokens are never returned, even past the accumulated mass.
  const TokenDistribution tail({0.5, 0.5, 0.0});
  EXPECT_EQ(SampleToken(tail, 0.99999999999999989), 1u);
}

TEST(Sampling, FrequenciesMatchDistribution) {
  const TokenDistribution d({0.1, 0.2, 0.3, 0.4});
  std::vector<double> counts(4, 0.0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    HashDrbg rng(StepSeed("freq", static_cast<std::uint64_t>(i)));
    counts[SampleToken(d, rng.NextDouble())] += 1.0;
  }
  const std::vector<double> expected = {0.1 * n, 0.2 * n, 0.3 * n, 0.4 * n};
  EXPECT_GT(ChiSquareGoodnessOfFit(counts, expected).p_value, 1e-4);
}

TEST(Distribution, ValidatesAndNormalizes) {
  EXPECT_THROW(TokenDistribution({0.5, -0.1}), InputError);
  EXPECT_THROW(TokenDistribution({0.0, 0.0}), InputError);
  EXPECT_THROW(TokenDistribution({0.5, NAN}), InputError);
  const TokenDistribution d({1.0, 3.0});
  EXPECT_DOUBLE_EQ(d[0], 0.25);
  EXPECT_DOUBLE_EQ(d[1], 0.75);
  EXPECT_NEAR(TokenDistribution::Uniform(8).Entropy(), std::log(8.0), 1e-12);
  EXPECT_EQ(TokenDistribution::PointMass(4, 2).Entropy(), 0.0);
}

}  // namespace
}  // namespace multimark
