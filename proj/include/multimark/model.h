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

#ifndef MULTIMARK_MODEL_H_
#define MULTIMARK_MODEL_H_

#include <cstddef>
#include <span>
#include <string>

#include "multimark/distribution.h"
#include "multimark/types.h"

namespace multimark {

// Source of next-token distributions. Implementations must return a
// distribution of exactly vocab_size() entries for any context, and must be
// safe to call from several threads at once.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual std::string fingerprint() const = 0;
  virtual TokenDistribution Next(std::span<const TokenId> context) const = 0;
};

}  // namespace multimark

#endif  // MULTIMARK_MODEL_H_
