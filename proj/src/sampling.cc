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

#include "multimark/sampling.h"

namespace multimark {

TokenId SampleToken(const TokenDistribution& dist, double u) {
  const auto probs = dist.probs();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cdf += probs[i];
    if (u < cdf) return static_cast<TokenId>(i);
  }
  // Rounding left u above the accumulated mass.
  return static_cast<TokenId>(last_positive);
}

TokenId SampleToken(const TokenDistribution& dist,
                    std::span<const std::uint8_t> seed) {
  HashDrbg rng(Sha256(seed));
  return SampleToken(dist, rng.NextDouble());
}

Digest StepSeed(std::string_view run_seed, std::uint64_t step) {
  Sha256Builder b;
  return b.Add("sample").Add(run_seed).AddU64(step).Finish();
}

}  // namespace multimark
