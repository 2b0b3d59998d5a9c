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

#ifndef MULTIMARK_ATTACKS_H_
#define MULTIMARK_ATTACKS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multimark/types.h"

namespace multimark {

enum class AttackKind { kCopyPaste, kSubstitute, kInsert, kDelete };

std::string_view AttackKindName(AttackKind kind);
AttackKind ParseAttackKind(std::string_view name);

enum class CopyPasteMode {
  kScattered,   // independent uniformly chosen positions
  kContiguous,  // one span at a uniformly chosen offset
};

// Number of edits for a text of `length` tokens: floor(epsilon * length).
std::size_t EditCount(double epsilon, std::size_t length);

// Overwrites floor(epsilon * L) positions of `watermarked` with the leading
// donor tokens, keeping the length. Throws InputError when the donor is too
// short or epsilon is outside [0, 1].
TokenSequence CopyPaste(std::span<const TokenId> watermarked,
                        std::span<const TokenId> donor, double epsilon,
                        std::string_view rng_seed,
                        CopyPasteMode mode = CopyPasteMode::kScattered);

// floor(epsilon * L) substitutions, insertions or deletions at uniform
// positions; new tokens are uniform over the vocabulary. Insertion accepts
// any epsilon >= 0, the other kinds require epsilon <= 1.
TokenSequence RandomEdits(std::span<const TokenId> tokens, AttackKind kind,
                          double epsilon, std::size_t vocab_size,
                          std::string_view rng_seed);

struct ProbeOptions {
  std::size_t h = 1;
  std::size_t min_texts = 1000;
  // A context qualifies when it occurs at least this often in each corpus.
  std::size_t min_occurrences = 100;
  std::size_t min_contexts = 5;
  double alpha = 0.001;
  // Next-token columns with fewer combined observations are pooled.
  std::size_t min_column = 10;
};

struct ProbeReport {
  std::size_t contexts_tested = 0;
  std::size_t contexts_rejected = 0;
  double rejection_fraction = 0.0;
  double alpha = 0.0;
};

// Compares next-token frequencies after every frequent h-token context of
// two corpora with a 2 x k chi-square test. Throws InputError on too few
// texts or qualifying contexts.
ProbeReport DistinguishabilityProbe(std::span<const TokenSequence> corpus_a,
                                    std::span<const TokenSequence> corpus_b,
                                    const ProbeOptions& options = {});

}  // namespace multimark

#endif  // MULTIMARK_ATTACKS_H_
