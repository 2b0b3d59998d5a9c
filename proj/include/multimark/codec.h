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

// Multi-bit encoder and decoder.
//
// Encoding, per generation step i:
//   1. texture key s_i from the last h tokens (prompt tokens included);
//   2. chunk position pos from (key, s_i), or i itself during the lead-in;
//   3. if s_i was already seen in this generation, sample from the model
//      distribution unchanged; otherwise record it, derive the permutation
//      from (key, s_i) and sample from the distribution reweighted for
//      chunk value payload[pos].
//
// Decoding replays steps h..L-1 of the text, counts for every position how
// many tokens fall in each message value's red list, extracts the least-hit
// value per position and scores R, the total red hits of the extracted
// message, against a null calibration: z = (R - mu_R) / sigma_R.

#ifndef MULTIMARK_CODEC_H_
#define MULTIMARK_CODEC_H_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "multimark/calibration.h"
#include "multimark/key.h"
#include "multimark/model.h"
#include "multimark/payload.h"
#include "multimark/prf.h"
#include "multimark/scheme.h"

namespace multimark {

inline constexpr double kDefaultZThreshold = -4.0;

// Texture keys seen during one generation or detection pass.
class HistoryLog {
 public:
  // Returns true when the key was not seen before (and records it).
  bool Insert(const TextureKey& key) { return seen_.insert(key).second; }
  bool Contains(const TextureKey& key) const { return seen_.contains(key); }
  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<TextureKey, TextureKeyHash> seen_;
};

enum class StepKind : std::uint8_t {
  kWatermarked,  // sampled from the reweighted distribution
  kRepeated,     // texture key seen before; sampled from the model as is
  kNoContext,    // fewer than h context tokens; sampled from the model as is
};

char StepKindCode(StepKind kind);  // 'w', 'r', 'c'
StepKind StepKindFromCode(char code);

struct GenerationRecord {
  TokenSequence tokens;
  std::vector<StepKind> steps;
  MessagePayload payload;

  std::string StepCodes() const;
};

struct EncodeOptions {
  SchemeParams params;
  std::size_t length = 0;  // tokens to generate
  std::string rng_seed;    // drives token sampling only
};

// Chunk position for response step `step` (0-based).
std::uint32_t ChunkPosition(const WatermarkKey& key, const TextureKey& texture,
                            std::size_t step, const SchemeParams& params);

GenerationRecord Encode(const LanguageModel& model,
                        std::span<const TokenId> prompt,
                        const WatermarkKey& key, const MessagePayload& payload,
                        const EncodeOptions& options);

// Permutations and positions come from key_set[payload.key_bits]. The set
// must hold exactly 2^payload.key_bit_count keys.
GenerationRecord EncodeKeyIter(const LanguageModel& model,
                               std::span<const TokenId> prompt,
                               std::span<const WatermarkKey> key_set,
                               const MessagePayload& payload,
                               const EncodeOptions& options);

// Red-list hit counts; counts[pos * 2^m + M] is R_pos^M.
struct RedCountTable {
  int m = 1;
  int H = 1;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> tokens_per_pos;  // L_pos
  std::size_t counted_steps = 0;
  std::size_t skipped_repeats = 0;

  RedCountTable(int m_bits, int chunks);
  std::uint32_t messages() const { return std::uint32_t{1} << m; }
  std::uint32_t& at(int pos, std::uint32_t message) {
    return counts[static_cast<std::size_t>(pos) * messages() + message];
  }
  std::uint32_t at(int pos, std::uint32_t message) const {
    return counts[static_cast<std::size_t>(pos) * messages() + message];
  }
};

// One counting pass of the decoder. Throws InputError when the text is not
// longer than h or holds out-of-vocabulary ids.
RedCountTable CountRedHits(std::span<const TokenId> text,
                           const WatermarkKey& key, const SchemeParams& params);

struct Extraction {
  std::vector<std::uint32_t> chunks;  // argmin per position, lowest M on ties
  std::uint64_t red_total = 0;        // R
};

Extraction ExtractMessage(const RedCountTable& table);

struct DetectionResult {
  MessagePayload extracted;
  std::uint64_t red_total = 0;
  double z = 0.0;
  double p_value = 1.0;  // lower tail of the standard normal at z
  bool decision = false;
  std::size_t counted_steps = 0;
  std::size_t counting_passes = 0;
};

DetectionResult Decode(std::span<const TokenId> text, const WatermarkKey& key,
                       const SchemeParams& params,
                       const NullCalibration& calibration,
                       double z_threshold = kDefaultZThreshold);

// Runs one counting pass per candidate key and keeps the key with the lowest
// z (lowest index on ties). The key set size must be a power of two.
DetectionResult DecodeKeyIter(std::span<const TokenId> text,
                              std::span<const WatermarkKey> key_set,
                              const SchemeParams& params,
                              const NullCalibration& calibration,
                              double z_threshold = kDefaultZThreshold);

// log2 of the key set size; throws ConfigError if it is not a power of two.
int KeyBitsForSetSize(std::size_t size);

}  // namespace multimark

#endif  // MULTIMARK_CODEC_H_
