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

#ifndef MULTIMARK_UNBIASEDNESS_H_
#define MULTIMARK_UNBIASEDNESS_H_

#include <cstddef>
#include <vector>

#include "multimark/distribution.h"
#include "multimark/prf.h"

namespace multimark {

inline constexpr std::size_t kMaxEnumerableVocab = 8;

struct UnbiasednessReport {
  int m = 1;
  // For each message value M, max over tokens of |E_perm[P_W^M] - P_O|.
  std::vector<double> max_deviation;
  std::size_t permutations = 0;

  double worst() const;
};

// Exact average of the reweighted distribution over all |V|! permutations.
// Throws ConfigError when |V| exceeds kMaxEnumerableVocab.
UnbiasednessReport ComputeUnbiasednessReport(const TokenDistribution& dist,
                                             int m);

// Max over tokens of |mean_M P_W^M - P_O| for one fixed permutation.
double MessageAveragedDeviation(const TokenDistribution& dist,
                                const Permutation& perm, int m);

}  // namespace multimark

#endif  // MULTIMARK_UNBIASEDNESS_H_
