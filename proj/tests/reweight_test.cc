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
#include <numeric>
#include <random>
#include <vector>

#include "multimark/error.h"
#include "multimark/reweight.h"
#include "multimark/unbiasedness.h"
#include "oracles.h"

namespace multimark {
namespace {

Permutation RandomPermutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<TokenId> order(n);
  std::iota(order.begin(), order.end(), TokenId{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Permutation(order);
}

TEST(ClassifyCase, FourRegimes) {
  EXPECT_EQ(ClassifyCase(0.0, 0.5), ReweightCase::kBelowHalf);
  EXPECT_EQ(ClassifyCase(0.1, 0.3), ReweightCase::kBelowHalf);
  EXPECT_EQ(ClassifyCase(0.5, 1.0), ReweightCase::kAboveHalf);
  EXPECT_EQ(ClassifyCase(0.7, 0.9), ReweightCase::kAboveHalf);
  EXPECT_EQ(ClassifyCase(0.2, 0.6), ReweightCase::kStraddleLow);
  EXPECT_EQ(ClassifyCase(0.3, 0.7), ReweightCase::kStraddleLow);
  EXPECT_EQ(ClassifyCase(0.4, 0.9), ReweightCase::kStraddleHigh);
}

TEST(IntervalsFor, CaseTable) {
  auto check = [](double a, double b, double zl, double zh, double dl,
                  double dh) {
    const ReweightIntervals iv =
        IntervalsFor({a, b, ClassifyCase(a, b)});
    EXPECT_DOUBLE_EQ(iv.zeroed.lo, zl);
    EXPECT_DOUBLE_EQ(iv.zeroed.hi, zh);
    EXPECT_DOUBLE_EQ(iv.doubled.lo, dl);
    EXPECT_DOUBLE_EQ(iv.doubled.hi, dh);
    EXPECT_NEAR(iv.zeroed.length(), iv.doubled.length(), 1e-15);
  };
  check(0.1, 0.3, 0.1, 0.3, 0.7, 0.9);
  check(0.6, 0.8, 0.6, 0.8, 0.2, 0.4);
  check(0.2, 0.6, 0.2, 0.4, 0.6, 0.8);
  check(0.4, 0.9, 0.6, 0.9, 0.1, 0.4);
}

TEST(RankCutoff, MatchesCeilingOracle) {
  for (std::size_t V = 2; V <= 70; ++V) {
    for (int m = 1; (std::size_t{1} << m) <= V; ++m) {
      for (std::uint64_t M = 0; M <= (std::uint64_t{1} << m); ++M) {
        ASSERT_EQ(RankCutoff(M, m, V), oracle::Cutoff(M, m, V))
            << "V=" << V << " m=" << m << " M=" << M;
      }
    }
  }
}

TEST(RedLists, PartitionTheRanks) {
  for (std::size_t V = 2; V <= 70; ++V) {
    for (int m = 1; (std::size_t{1} << m) <= V; ++m) {
      std::vector<int> owner(V, -1);
      for (std::uint32_t M = 0; M < (1u << m); ++M) {
        const RedList rl = RedListFor(M, m, V);
        EXPECT_GE(rl.size(), 1u);
        for (std::size_t r = rl.begin; r < rl.end; ++r) {
          ASSERT_EQ(owner[r], -1);
          owner[r] = static_cast<int>(M);
        }
      }
      for (std::size_t r = 0; r < V; ++r) {
        ASSERT_NE(owner[r], -1);
        ASSERT_EQ(MessageForRank(r, m, V), static_cast<std::uint32_t>(owner[r]));
      }
    }
  }
}

TEST(RedLists, HalfVocabularyForOneBit) {
  const RedList zero = RedListFor(0, 1, 256);
  const RedList one = RedListFor(1, 1, 256);
  EXPECT_EQ(zero.begin, 0u);
  EXPECT_EQ(zero.end, 128u);
  EXPECT_EQ(one.begin, 128u);
  EXPECT_EQ(one.end, 256u);
  const Permutation p = Permutation::Identity(4);
  EXPECT_EQ(RedListFor(1, 1, 4).Tokens(p), (std::vector<TokenId>{2, 3}));
}

TEST(RedLists, QuarterOfEightTokens) {
  const RedList rl = RedListFor(1, 2, 8);
  EXPECT_EQ(rl.begin, 2u);
  EXPECT_EQ(rl.end, 4u);
}

TEST(ValidateChunk, Errors) {
  EXPECT_THROW(ValidateChunk(0, 0, 8), ConfigError);
  EXPECT_THROW(ValidateChunk(0, 4, 8), ConfigError);
  EXPECT_THROW(ValidateChunk(4, 2, 8), ConfigError);
  EXPECT_NO_THROW(ValidateChunk(3, 2, 8));
}

TEST(CumulativeAxis, EndpointsAndMismatch) {
  const TokenDistribution d({0.1, 0.2, 0.3, 0.4});
  const Permutation p({3, 1, 0, 2});
  const CumulativeAxis axis(d, p);
  EXPECT_EQ(axis.at(0), 0.0);
  EXPECT_EQ(axis.at(4), 1.0);
  EXPECT_NEAR(axis.at(1), 0.4, 1e-15);
  EXPECT_NEAR(axis.at(2), 0.6, 1e-15);
  EXPECT_THROW(CumulativeAxis(d, Permutation::Identity(3)), ConfigError);
}

TEST(Reweight, UniformHandExample) {
  // Four equal tokens, one bit, message 0: ranks 0-1 sit on [0, 0.5] and are
  // zeroed, ranks 2-3 sit on [0.5, 1] and are doubled.
  const TokenDistribution d = TokenDistribution::Uniform(4);
  const TokenDistribution w =
      ReweightDistribution(d, Permutation({2, 0, 3, 1}), 0, 1);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_DOUBLE_EQ(w[3], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(Reweight, PointMassUnchanged) {
  const TokenDistribution d = TokenDistribution::PointMass(8, 5);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Permutation p = RandomPermutation(8, rng);
    for (std::uint32_t M = 0; M < 4; ++M) {
      const TokenDistribution w = ReweightDistribution(d, p, M, 2);
      EXPECT_NEAR(w[5], 1.0, 1e-15);
    }
  }
}

TEST(Reweight, MatchesCdfOffsetOracle) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t V = 2 + rng() % 40;
    const std::vector<double> probs = oracle::RandomDistribution(V, rng);
    const TokenDistribution d(probs);
    const Permutation p = RandomPermutation(V, rng);
    std::vector<double> ranked(V);
    for (std::size_t k = 0; k < V; ++k) ranked[k] = d[p[k]];
    for (int m = 1; m <= 3 && (std::size_t{1} << m) <= V; ++m) {
      for (std::uint32_t M = 0; M < (1u << m); ++M) {
        const std::vector<double> want = oracle::Reweight(ranked, M, m);
        const TokenDistribution got = ReweightDistribution(d, p, M, m);
        for (std::size_t k = 0; k < V; ++k) {
          worst = std::max(worst, std::abs(got[p[k]] - want[k]));
        }
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Reweight, IsADistribution) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t V = 2 + rng() % 64;
    const TokenDistribution d(oracle::RandomDistribution(V, rng));
    const Permutation p = RandomPermutation(V, rng);
    const CumulativeAxis axis(d, p);
    const ChunkBoundaries b = ComputeChunkBoundaries(axis, 0, 1);
    const std::vector<double> ranked = ReweightRankOrder(axis, b);
    double sum = 0.0;
    for (double x : ranked) {
      ASSERT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Reweight, RedListEmptiedWhenChunkDoesNotStraddle) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t V = 4 + rng() % 60;
    const TokenDistribution d(oracle::RandomDistribution(V, rng));
    const Permutation p = RandomPermutation(V, rng);
    for (int m = 1; m <= 2; ++m) {
      for (std::uint32_t M = 0; M < (1u << m); ++M) {
        const ChunkBoundaries b =
            ComputeChunkBoundaries(CumulativeAxis(d, p), M, m);
        if (b.case_id != ReweightCase::kBelowHalf &&
            b.case_id != ReweightCase::kAboveHalf) {
          continue;
        }
        const TokenDistribution w = ReweightDistribution(d, p, M, m);
        for (TokenId t : RedListFor(M, m, V).Tokens(p)) {
          ASSERT_LT(w[t], 1e-15);
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Reweight, AverageOverMessagesIsOriginal) {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t V = 8 + rng() % 100;
    const TokenDistribution d(oracle::RandomDistribution(V, rng));
    const Permutation p = RandomPermutation(V, rng);
    for (int m = 1; m <= 3; ++m) {
      worst = std::max(worst, MessageAveragedDeviation(d, p, m));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

}  // namespace
}  // namespace multimark
