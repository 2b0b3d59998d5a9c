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

#include "multimark/unbiasedness.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "multimark/error.h"
#include "multimark/reweight.h"

namespace multimark {

double UnbiasednessReport::worst() const {
  double w = 0.0;
  for (double d : max_deviation) w = std::max(w, d);
  return w;
}

UnbiasednessReport ComputeUnbiasednessReport(const TokenDistribution& dist,
                                             int m) {
  const std::size_t V = dist.size();
  if (V > kMaxEnumerableVocab) {
    throw ConfigError("vocabulary too large to enumerate permutations");
  }
  const std::uint32_t messages = std::uint32_t{1} << m;
  ValidateChunk(0, m, V);

  std::vector<std::vector<CompensatedSum>> sums(
      messages, std::vector<CompensatedSum>(V));
  std::vector<TokenId> order(V);
  std::iota(order.begin(), order.end(), TokenId{0});
  std::size_t count = 0;
  do {
    const Permutation perm(order);
    for (std::uint32_t msg = 0; msg < messages; ++msg) {
      const TokenDistribution w = ReweightDistribution(dist, perm, msg, m);
      for (TokenId t = 0; t < V; ++t) sums[msg][t].Add(w[t]);
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));

  UnbiasednessReport report;
  report.m = m;
  report.permutations = count;
  report.max_deviation.assign(messages, 0.0);
  for (std::uint32_t msg = 0; msg < messages; ++msg) {
    for (TokenId t = 0; t < V; ++t) {
      const double mean = sums[msg][t].value() / static_cast<double>(count);
      report.max_deviation[msg] =
          std::max(report.max_deviation[msg], std::abs(mean - dist[t]));
    }
  }
  return report;
}

double MessageAveragedDeviation(const TokenDistribution& dist,
                                const Permutation& perm, int m) {
  const std::size_t V = dist.size();
  const std::uint32_t messages = std::uint32_t{1} << m;
  std::vector<CompensatedSum> sums(V);
  for (std::uint32_t msg = 0; msg < messages; ++msg) {
    const TokenDistribution w = ReweightDistribution(dist, perm, msg, m);
    for (TokenId t = 0; t < V; ++t) sums[t].Add(w[t]);
  }
  double worst = 0.0;
  for (TokenId t = 0; t < V; ++t) {
    const double mean = sums[t].value() / static_cast<double>(messages);
    worst = std::max(worst, std::abs(mean - dist[t]));
  }
  return worst;
}

}  // namespace multimark
