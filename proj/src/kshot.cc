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

#include "multimark/kshot.h"

#include "multimark/codec.h"
#include "multimark/error.h"
#include "multimark/numerics.h"
#include "multimark/prf.h"

namespace multimark {
namespace {

std::uint64_t DrawTimestamp(const std::string& seed, std::uint64_t query,
                            int bits) {
  Sha256Builder b;
  HashDrbg rng(b.Add("kshot-timestamp").Add(seed).AddU64(query).Finish());
  const std::uint64_t v = rng.NextU64();
  return bits >= 64 ? v : v & ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

KShotResult KShotProbe(const LanguageModel& model, const WatermarkKey& key,
                       const SchemeParams& params,
                       std::span<const TokenId> prompt,
                       const KShotOptions& options) {
  params.Validate();
  if (options.queries == 0) throw ConfigError("probe needs at least one query");

  KShotResult result;
  result.queries = options.queries;
  if (options.queries < kKShotRecommendedQueries) {
    result.warnings.push_back(
        "only " + std::to_string(options.queries) +
        " queries; the probe is underpowered below " +
        std::to_string(kKShotRecommendedQueries));
  }

  const std::size_t V = params.vocab_size;
  const TokenDistribution original = model.Next(prompt);
  result.first_token_counts.assign(V, 0);

  EncodeOptions encode;
  encode.params = params;
  encode.length = 1;
  Metadata metadata = options.metadata;
  for (std::size_t q = 0; q < options.queries; ++q) {
    if (options.fresh_timestamps) {
      metadata.timestamp =
          DrawTimestamp(options.seed, q, metadata.timestamp_bits);
    }
    const MessagePayload payload = PackPayload(metadata, params.m, params.H);
    encode.rng_seed = options.seed + "/" + std::to_string(q);
    const GenerationRecord record =
        Encode(model, prompt, key, payload, encode);
    ++result.first_token_counts[record.tokens.front()];
  }

  std::vector<double> observed(V);
  result.expected.resize(V);
  for (std::size_t t = 0; t < V; ++t) {
    observed[t] = static_cast<double>(result.first_token_counts[t]);
    result.expected[t] =
        static_cast<double>(options.queries) * original[static_cast<TokenId>(t)];
  }
  const ChiSquareResult chi = ChiSquareGoodnessOfFit(observed, result.expected);
  result.statistic = chi.statistic;
  result.dof = chi.dof;
  result.p_value = chi.p_value;
  return result;
}

}  // namespace multimark
