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

#include "multimark/attacks.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "multimark/error.h"
#include "multimark/numerics.h"
#include "multimark/prf.h"

namespace multimark {
namespace {

HashDrbg AttackStream(std::string_view tag, std::string_view seed) {
  Sha256Builder b;
  return HashDrbg(b.Add("attack").Add(tag).Add(seed).Finish());
}

// `count` distinct indices from [0, n), ascending.
std::vector<std::size_t> ChoosePositions(std::size_t n, std::size_t count,
                                         HashDrbg& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j =
        i + rng.Uniform(static_cast<std::uint32_t>(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void CheckEpsilon(double epsilon, bool allow_above_one) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw InputError("epsilon must be a finite non-negative number");
  }
  if (!allow_above_one && epsilon > 1.0) {
    throw InputError("epsilon must not exceed 1 for this attack");
  }
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kCopyPaste:
      return "copy_paste";
    case AttackKind::kSubstitute:
      return "substitute";
    case AttackKind::kInsert:
      return "insert";
    case AttackKind::kDelete:
      return "delete";
  }
  return "unknown";
}

AttackKind ParseAttackKind(std::string_view name) {
  for (AttackKind k : {AttackKind::kCopyPaste, AttackKind::kSubstitute,
                       AttackKind::kInsert, AttackKind::kDelete}) {
    if (AttackKindName(k) == name) return k;
  }
  throw ConfigError("unknown attack kind '" + std::string(name) + "'");
}

std::size_t EditCount(double epsilon, std::size_t length) {
  // The small slack keeps products like 0.3 * 300 from rounding down.
  return static_cast<std::size_t>(
      std::floor(epsilon * static_cast<double>(length) + 1e-9));
}

TokenSequence CopyPaste(std::span<const TokenId> watermarked,
                        std::span<const TokenId> donor, double epsilon,
                        std::string_view rng_seed, CopyPasteMode mode) {
  CheckEpsilon(epsilon, false);
  const std::size_t n = EditCount(epsilon, watermarked.size());
  if (donor.size() < n) {
    throw InputError("donor has " + std::to_string(donor.size()) +
                     " tokens but " + std::to_string(n) + " are needed");
  }
  TokenSequence out(watermarked.begin(), watermarked.end());
  if (n == 0) return out;
  HashDrbg rng = AttackStream("copy_paste", rng_seed);
  if (mode == CopyPasteMode::kContiguous) {
    const std::size_t start = rng.Uniform(
        static_cast<std::uint32_t>(watermarked.size() - n + 1));
    std::copy_n(donor.begin(), n, out.begin() + static_cast<std::ptrdiff_t>(start));
    return out;
  }
  const std::vector<std::size_t> pos =
      ChoosePositions(watermarked.size(), n, rng);
  for (std::size_t j = 0; j < n; ++j) out[pos[j]] = donor[j];
  return out;
}

TokenSequence RandomEdits(std::span<const TokenId> tokens, AttackKind kind,
                          double epsilon, std::size_t vocab_size,
                          std::string_view rng_seed) {
  if (vocab_size == 0) throw ConfigError("vocabulary size must be positive");
  const auto V = static_cast<std::uint32_t>(vocab_size);
  const std::size_t L = tokens.size();
  HashDrbg rng = AttackStream(AttackKindName(kind), rng_seed);
  TokenSequence out(tokens.begin(), tokens.end());
  switch (kind) {
    case AttackKind::kCopyPaste:
      throw ConfigError("copy_paste needs a donor text; use CopyPaste");
    case AttackKind::kSubstitute: {
      CheckEpsilon(epsilon, false);
      for (std::size_t p : ChoosePositions(L, EditCount(epsilon, L), rng)) {
        out[p] = rng.Uniform(V);
      }
      return out;
    }
    case AttackKind::kInsert: {
      CheckEpsilon(epsilon, true);
      const std::size_t n = EditCount(epsilon, L);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t at =
            rng.Uniform(static_cast<std::uint32_t>(out.size() + 1));
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(at),
                   rng.Uniform(V));
      }
      return out;
    }
    case AttackKind::kDelete: {
      if (std::isfinite(epsilon) && epsilon > 1.0) {
        throw InputError("cannot delete more tokens than the text holds");
      }
      CheckEpsilon(epsilon, false);
      const std::vector<std::size_t> pos =
          ChoosePositions(L, EditCount(epsilon, L), rng);
      TokenSequence kept;
      kept.reserve(L - pos.size());
      std::size_t next = 0;
      for (std::size_t i = 0; i < L; ++i) {
        if (next < pos.size() && pos[next] == i) {
          ++next;
          continue;
        }
        kept.push_back(tokens[i]);
      }
      return kept;
    }
  }
  return out;
}

namespace {

using ContextCounts = std::map<TokenSequence, std::map<TokenId, std::uint64_t>>;

ContextCounts CountContexts(std::span<const TokenSequence> corpus,
                            std::size_t h) {
  ContextCounts counts;
  for (const TokenSequence& text : corpus) {
    for (std::size_t i = h; i < text.size(); ++i) {
      TokenSequence ctx(text.begin() + static_cast<std::ptrdiff_t>(i - h),
                        text.begin() + static_cast<std::ptrdiff_t>(i));
      ++counts[std::move(ctx)][text[i]];
    }
  }
  return counts;
}

std::uint64_t Total(const std::map<TokenId, std::uint64_t>& row) {
  std::uint64_t n = 0;
  for (const auto& [token, c] : row) n += c;
  return n;
}

}  // namespace

ProbeReport DistinguishabilityProbe(std::span<const TokenSequence> corpus_a,
                                    std::span<const TokenSequence> corpus_b,
                                    const ProbeOptions& options) {
  if (options.h < 1) throw ConfigError("probe window must be >= 1");
  if (corpus_a.size() < options.min_texts ||
      corpus_b.size() < options.min_texts) {
    throw InputError("probe needs at least " +
                     std::to_string(options.min_texts) +
                     " texts in each corpus");
  }
  const ContextCounts a = CountContexts(corpus_a, options.h);
  const ContextCounts b = CountContexts(corpus_b, options.h);

  ProbeReport report;
  report.alpha = options.alpha;
  for (const auto& [ctx, row_a] : a) {
    const auto it = b.find(ctx);
    if (it == b.end()) continue;
    const auto& row_b = it->second;
    if (Total(row_a) < options.min_occurrences ||
        Total(row_b) < options.min_occurrences) {
      continue;
    }
    std::map<TokenId, std::pair<double, double>> cells;
    for (const auto& [t, c] : row_a) cells[t].first += static_cast<double>(c);
    for (const auto& [t, c] : row_b) cells[t].second += static_cast<double>(c);
    std::vector<double> col_a;
    std::vector<double> col_b;
    double pool_a = 0.0;
    double pool_b = 0.0;
    for (const auto& [t, ab] : cells) {
      if (ab.first + ab.second < static_cast<double>(options.min_column)) {
        pool_a += ab.first;
        pool_b += ab.second;
      } else {
        col_a.push_back(ab.first);
        col_b.push_back(ab.second);
      }
    }
    if (pool_a + pool_b > 0.0) {
      col_a.push_back(pool_a);
      col_b.push_back(pool_b);
    }
    const ChiSquareResult chi = ChiSquareTwoSample(col_a, col_b);
    if (chi.dof < 1) continue;
    ++report.contexts_tested;
    if (chi.p_value < options.alpha) ++report.contexts_rejected;
  }
  if (report.contexts_tested < options.min_contexts) {
    throw InputError("only " + std::to_string(report.contexts_tested) +
                     " contexts are frequent enough to compare; need " +
                     std::to_string(options.min_contexts));
  }
  report.rejection_fraction = static_cast<double>(report.contexts_rejected) /
                              static_cast<double>(report.contexts_tested);
  return report;
}

}  // namespace multimark
