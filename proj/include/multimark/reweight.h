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

// Four-case message reweighting on the cumulative probability axis.
//
// The vocabulary is laid out on [0, 1] in permutation order, each token
// occupying an interval as wide as its probability. Message value M of an
// m-bit chunk owns the rank range (c_M, c_{M+1}] with c_M = ceil(M |V| / 2^m);
// on the axis that range spans [alpha, beta]. Reweighting zeroes an interval
// A and doubles a mirror interval B of equal length:
//
//   below half    (beta <= 0.5)                  A = [a, b]      B = [1-b, 1-a]
//   above half    (alpha >= 0.5)                 A = [a, b]      B = [1-b, 1-a]
//   straddle low  (a < 0.5 < b, a + b <= 1)      A = [a, 1-b]    B = [b, 1-a]
//   straddle high (a < 0.5 < b, a + b > 1)       A = [1-a, b]    B = [1-b, a]
//
// and each token's new mass is p - |S ∩ A| + |S ∩ B| for its axis segment S.

#ifndef MULTIMARK_REWEIGHT_H_
#define MULTIMARK_REWEIGHT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "multimark/distribution.h"
#include "multimark/prf.h"

namespace multimark {

// Cumulative probabilities in permutation order. at(0) == 0, at(|V|) == 1 and
// at(k) - at(k-1) is the probability of the token at rank k-1 (0-based).
class CumulativeAxis {
 public:
  CumulativeAxis(const TokenDistribution& dist, const Permutation& perm);

  std::size_t vocab_size() const { return values_.size() - 1; }
  double at(std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

CumulativeAxis BuildAxis(const TokenDistribution& dist,
                         const Permutation& perm);

// Numbering follows the reweighting diagram (1..4).
enum class ReweightCase : std::uint8_t {
  kBelowHalf = 1,
  kAboveHalf = 2,
  kStraddleLow = 3,
  kStraddleHigh = 4,
};

ReweightCase ClassifyCase(double alpha, double beta);

struct ChunkBoundaries {
  double alpha = 0.0;
  double beta = 0.0;
  ReweightCase case_id = ReweightCase::kBelowHalf;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  // Length of the intersection with [lo, hi]; zero when disjoint.
  double Overlap(double seg_lo, double seg_hi) const;
};

struct ReweightIntervals {
  Interval zeroed;   // A
  Interval doubled;  // B
};

ReweightIntervals IntervalsFor(const ChunkBoundaries& b);

// Throws ConfigError unless 1 <= m, 2^m <= vocab_size and message < 2^m.
void ValidateChunk(std::uint32_t message, int m, std::size_t vocab_size);

// ceil(message * vocab_size / 2^m), computed exactly in integers.
std::size_t RankCutoff(std::uint64_t message, int m, std::size_t vocab_size);

ChunkBoundaries ComputeChunkBoundaries(const CumulativeAxis& axis,
                                       std::uint32_t message, int m);

// Contiguous 0-based rank range [begin, end) assigned to one message value.
struct RedList {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool ContainsRank(std::size_t rank) const {
    return rank >= begin && rank < end;
  }
  std::size_t size() const { return end - begin; }
  std::vector<TokenId> Tokens(const Permutation& perm) const;
};

RedList RedListFor(std::uint32_t message, int m, std::size_t vocab_size);

// Message value whose red list contains `rank`.
std::uint32_t MessageForRank(std::size_t rank, int m, std::size_t vocab_size);

// Reweighted masses in rank order (entry k belongs to perm[k]).
std::vector<double> ReweightRankOrder(const CumulativeAxis& axis,
                                      const ChunkBoundaries& boundaries);

// The watermarked distribution for one chunk, indexed by token id.
TokenDistribution ReweightDistribution(const TokenDistribution& dist,
                                       const Permutation& perm,
                                       std::uint32_t message, int m);

}  // namespace multimark

#endif  // MULTIMARK_REWEIGHT_H_
