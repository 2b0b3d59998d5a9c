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

// Synthetic autoregressive models.
//
// The last `window` context tokens are hashed together with the model seed
// into one of `context_classes` buckets. Each bucket owns a fixed vector of
// standard normal logits and the next-token distribution is
// softmax(logits / temperature). Temperature controls entropy; few context
// classes force texture-key repeats.

#ifndef MULTIMARK_SIMLM_H_
#define MULTIMARK_SIMLM_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "multimark/model.h"
#include "multimark/types.h"

namespace multimark {

struct SyntheticModelSpec {
  std::size_t vocab_size = 256;
  double temperature = 1.0;
  // Zero means every distinct window is its own class.
  std::uint64_t context_classes = 0;
  std::string seed = "simlm";
  int window = 3;

  void Validate() const;
};

class SyntheticModel final : public LanguageModel {
 public:
  explicit SyntheticModel(SyntheticModelSpec spec);

  std::size_t vocab_size() const override { return spec_.vocab_size; }
  std::string fingerprint() const override;
  TokenDistribution Next(std::span<const TokenId> context) const override;

  const SyntheticModelSpec& spec() const { return spec_; }
  std::uint64_t ContextClass(std::span<const TokenId> context) const;

 private:
  SyntheticModelSpec spec_;
};

// Ancestral sampling of `length` tokens after `prompt`, using the same
// per-step sampling stream as the watermark encoder.
TokenSequence GeneratePlain(const LanguageModel& model,
                            std::span<const TokenId> prompt,
                            std::size_t length, std::string_view rng_seed);

// Fraction of the texture windows of steps h..L-1 whose key already
// occurred earlier in the same text. Throws InputError unless L > h.
double MeasuredRepetition(std::span<const TokenId> tokens, std::size_t h);

}  // namespace multimark

#endif  // MULTIMARK_SIMLM_H_
