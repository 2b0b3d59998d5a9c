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

#include "multimark/reweight.h"

#include <algorithm>
#include <string>

#include "multimark/error.h"

namespace multimark {

CumulativeAxis::CumulativeAxis(const TokenDistribution& dist,
                               const Permutation& perm) {
  if (dist.size() != perm.size()) {
    throw ConfigError("distribution has " + std::to_string(dist.size()) +
                      " entries but permutation has " +
                      std::to_string(perm.size()));
  }
  const std::size_t n = dist.size();
  values_.resize(n + 1);
  values_[0] = 0.0;
  CompensatedSum sum;
  for (std::size_t k = 0; k < n; ++k) {
    sum.Add(dist[perm[k]]);
    values_[k + 1] = std::min(sum.value(), 1.0);
  }
  values_[n] = 1.0;
}

CumulativeAxis BuildAxis(const TokenDistribution& dist,
                         const Permutation& perm) {
  return CumulativeAxis(dist, perm);
}

ReweightCase ClassifyCase(double alpha, double beta) {
  if (beta <= 0.5) return ReweightCase::kBelowHalf;
  if (alpha >= 0.5) return ReweightCase::kAboveHalf;
  return alpha + beta <= 1.0 ? ReweightCase::kStraddleLow
                             : ReweightCase::kStraddleHigh;
}

double Interval::Overlap(double seg_lo, double seg_hi) const {
  const double d = std::min(seg_hi, hi) - std::max(seg_lo, lo);
  return d > 0.0 ? d : 0.0;
}

ReweightIntervals IntervalsFor(const ChunkBoundaries& b) {
  const double a = b.alpha;
  const double c = b.beta;
  switch (b.case_id) {
    case ReweightCase::kBelowHalf:
    case ReweightCase::kAboveHalf:
      return {{a, c}, {1.0 - c, 1.0 - a}};
    case ReweightCase::kStraddleLow:
      return {{a, 1.0 - c}, {c, 1.0 - a}};
    case ReweightCase::kStraddleHigh:
      return {{1.0 - a, c}, {1.0 - c, a}};
  }
  return {};
}

void ValidateChunk(std::uint32_t message, int m, std::size_t vocab_size) {
  if (m < 1 || m > 24) {
    throw ConfigError("bits per chunk m must be in [1, 24], got " +
                      std::to_string(m));
  }
  if ((std::size_t{1} << m) > vocab_size) {
    throw ConfigError("2^m = " + std::to_string(std::size_t{1} << m) +
                      " exceeds vocabulary size " + std::to_string(vocab_size));
  }
  if (message >= (std::uint32_t{1} << m)) {
    throw ConfigError("message value " + std::to_string(message) +
                      " does not fit in " + std::to_string(m) + " bits");
  }
}

std::size_t RankCutoff(std::uint64_t message, int m, std::size_t vocab_size) {
  const std::uint64_t scaled = message * vocab_size;
  return static_cast<std::size_t>((scaled + (std::uint64_t{1} << m) - 1) >> m);
}

ChunkBoundaries ComputeChunkBoundaries(const CumulativeAxis& axis,
                                       std::uint32_t message, int m) {
  const std::size_t n = axis.vocab_size();
  ValidateChunk(message, m, n);
  ChunkBoundaries b;
  b.alpha = axis.at(RankCutoff(message, m, n));
  b.beta = axis.at(RankCutoff(std::uint64_t{message} + 1, m, n));
  b.case_id = ClassifyCase(b.alpha, b.beta);
  return b;
}

std::vector<TokenId> RedList::Tokens(const Permutation& perm) const {
  return {perm.order().begin() + static_cast<std::ptrdiff_t>(begin),
          perm.order().begin() + static_cast<std::ptrdiff_t>(end)};
}

RedList RedListFor(std::uint32_t message, int m, std::size_t vocab_size) {
  ValidateChunk(message, m, vocab_size);
  return {RankCutoff(message, m, vocab_size),
          RankCutoff(std::uint64_t{message} + 1, m, vocab_size)};
}

std::uint32_t MessageForRank(std::size_t rank, int m, std::size_t vocab_size) {
  // Cutoffs are ceilings, so rank r (0-based) belongs to the largest M with
  // c_M <= r, i.e. M = floor(r * 2^m / |V|).
  return static_cast<std::uint32_t>((std::uint64_t{rank} << m) / vocab_size);
}

std::vector<double> ReweightRankOrder(const CumulativeAxis& axis,
                                      const ChunkBoundaries& boundaries) {
  const ReweightIntervals iv = IntervalsFor(boundaries);
  const std::size_t n = axis.vocab_size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = axis.at(k);
    const double hi = axis.at(k + 1);
    const double kept = (hi - lo) - iv.zeroed.Overlap(lo, hi);
    const double w = kept + iv.doubled.Overlap(lo, hi);
    out[k] = w > 0.0 ? w : 0.0;
  }
  return out;
}

TokenDistribution ReweightDistribution(const TokenDistribution& dist,
                                       const Permutation& perm,
                                       std::uint32_t message, int m) {
  const CumulativeAxis axis(dist, perm);
  const ChunkBoundaries b = ComputeChunkBoundaries(axis, message, m);
  const std::vector<double> ranked = ReweightRankOrder(axis, b);
  std::vector<double> probs(dist.size());
  for (std::size_t k = 0; k < ranked.size(); ++k) probs[perm[k]] = ranked[k];
  return TokenDistribution(std::move(probs));
}

}  // namespace multimark
