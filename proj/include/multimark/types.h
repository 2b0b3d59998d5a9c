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

#ifndef MULTIMARK_TYPES_H_
#define MULTIMARK_TYPES_H_

#include <cstdint>
#include <vector>

namespace multimark {

// Token ids are 0-based indices into the vocabulary.
using TokenId = std::uint32_t;
using TokenSequence = std::vector<TokenId>;

}  // namespace multimark

#endif  // MULTIMARK_TYPES_H_
