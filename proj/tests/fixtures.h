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


#ifndef MULTIMARK_TESTS_FIXTURES_H_
#define MULTIMARK_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "multimark/calibration.h"
#include "multimark/codec.h"
#include "multimark/key.h"
#include "multimark/simlm.h"

namespace multimark::testing {

inline SyntheticModel MakeModel(std::size_t vocab = 256,
                                double temperature = 1.0,
                                std::uint64_t classes = 0) {
  SyntheticModelSpec spec;
  spec.vocab_size = vocab;
  spec.temperature = temperature;
  spec.context_classes = classes;
  return SyntheticModel(spec);
}

inline SchemeParams Params(std::size_t vocab, int m, int H, int h = 3) {
  SchemeParams p;
  p.vocab_size = vocab;
  p.m = m;
  p.H = H;
  p.h = h;
  return p;
}

inline TokenSequence PromptFor(std::size_t i, std::size_t vocab, int h = 3) {
  TokenSequence prompt;
  for (int k = 0; k < h; ++k) {
    prompt.push_back(static_cast<TokenId>((i * 7919 + k * 104729) % vocab));
  }
  return prompt;
}

inline std::vector<TokenSequence> PlainCorpus(const LanguageModel& model,
                                              std::size_t count,
                                              std::size_t length,
                                              const std::string& seed) {
  std::vector<TokenSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(GeneratePlain(model, PromptFor(i, model.vocab_size()),
                                length, seed + "/" + std::to_string(i)));
  }
  return out;
}

inline MessagePayload RandomPayload(int m, int H, std::uint64_t seed) {
  MessagePayload p;
  p.m = m;
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + 1;
  for (int j = 0; j < H; ++j) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 29;
    p.chunks.push_back(static_cast<std::uint32_t>(x) & ((1u << m) - 1));
  }
  return p;
}

}  // namespace multimark::testing

#endif  // MULTIMARK_TESTS_FIXTURES_H_
