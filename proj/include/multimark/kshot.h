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

#ifndef MULTIMARK_KSHOT_H_
#define MULTIMARK_KSHOT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "multimark/key.h"
#include "multimark/model.h"
#include "multimark/payload.h"
#include "multimark/scheme.h"

namespace multimark {

inline constexpr std::size_t kKShotRecommendedQueries = 1000;

struct KShotOptions {
  std::size_t queries = 0;
  // Layout and fixed fields of every payload.
  Metadata metadata;
  // Draw fresh timestamp bits for every query; otherwise all queries carry
  // metadata.timestamp.
  bool fresh_timestamps = true;
  std::string seed = "kshot";
};

struct KShotResult {
  std::vector<std::uint64_t> first_token_counts;
  std::vector<double> expected;  // queries * P_O(token | prompt)
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t queries = 0;
  std::vector<std::string> warnings;
};

// Queries the watermarked generator `queries` times with the same prompt,
// each with its own history log and payload, and tests the first response
// token against the model distribution. A large p-value means no bias was
// detected. Payloads are packed with PackPayload(metadata, m, H).
KShotResult KShotProbe(const LanguageModel& model, const WatermarkKey& key,
                       const SchemeParams& params,
                       std::span<const TokenId> prompt,
                       const KShotOptions& options);

}  // namespace multimark

#endif  // MULTIMARK_KSHOT_H_
