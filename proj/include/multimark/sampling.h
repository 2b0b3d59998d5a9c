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

#ifndef MULTIMARK_SAMPLING_H_
#define MULTIMARK_SAMPLING_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "multimark/distribution.h"
#include "multimark/prf.h"

namespace multimark {

// Inverse-CDF draw for u in [0, 1). Zero-mass tokens are never returned.
TokenId SampleToken(const TokenDistribution& dist, double u);

// Draw driven by the hash-counter stream seeded with SHA-256(seed).
TokenId SampleToken(const TokenDistribution& dist,
                    std::span<const std::uint8_t> seed);

// Per-step sampling seed used by every generator in the library:
// SHA-256("sample" || run_seed || be64(step)).
Digest StepSeed(std::string_view run_seed, std::uint64_t step);

}  // namespace multimark

#endif  // MULTIMARK_SAMPLING_H_
