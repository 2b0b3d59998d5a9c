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

#include "multimark/codec.h"

#include <exception>
#include <string>

#include "multimark/error.h"
#include "multimark/numerics.h"
#include "multimark/reweight.h"
#include "multimark/sampling.h"

namespace multimark {

void SchemeParams::Validate() const {
  if (vocab_size < 2) throw ConfigError("vocabulary must have >= 2 tokens");
  if (h < 1) throw ConfigError("texture window h must be >= 1");
  if (m < 1 || m > 24) throw ConfigError("bits per chunk m must be in [1, 24]");
  if ((std::size_t{1} << m) > vocab_size) {
    throw ConfigError("2^m exceeds the vocabulary size");
  }
  if (H < 1) throw ConfigError("chunk count H must be >= 1");
  if (lead_in < 0) throw ConfigError("lead-in must be non-negative");
}

char StepKindCode(StepKind kind) {
  switch (kind) {
    case StepKind::kWatermarked:
      return 'w';
    case StepKind::kRepeated:
      return 'r';
    case StepKind::kNoContext:
      return 'c';
  }
  return '?';
}

StepKind StepKindFromCode(char code) {
  switch (code) {
    case 'w':
      return StepKind::kWatermarked;
    case 'r':
      return StepKind::kRepeated;
    case 'c':
      return StepKind::kNoContext;
    default:
      throw FormatError(std::string("unknown step flag '") + code + "'");
  }
}

std::string GenerationRecord::StepCodes() const {
  std::string out;
  out.reserve(steps.size());
  for (StepKind k : steps) out.push_back(StepKindCode(k));
  return out;
}

std::uint32_t ChunkPosition(const WatermarkKey& key, const TextureKey& texture,
                            std::size_t step, const SchemeParams& params) {
  if (step < static_cast<std::size_t>(params.lead_in)) {
    return static_cast<std::uint32_t>(step % static_cast<std::size_t>(params.H));
  }
  return AllocatePosition(key, texture, static_cast<std::uint32_t>(params.H));
}

int KeyBitsForSetSize(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0) {
    throw ConfigError("key set size " + std::to_string(size) +
                      " is not a power of two");
  }
  int bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  return bits;
}

GenerationRecord EncodeKeyIter(const LanguageModel& model,
                               std::span<const TokenId> prompt,
                               std::span<const WatermarkKey> key_set,
                               const MessagePayload& payload,
                               const EncodeOptions& options) {
  const SchemeParams& params = options.params;
  params.Validate();
  payload.Validate();
  if (model.vocab_size() != params.vocab_size) {
    throw ConfigError("model vocabulary " + std::to_string(model.vocab_size()) +
                      " differs from scheme vocabulary " +
                      std::to_string(params.vocab_size));
  }
  if (payload.m != params.m || payload.H() != params.H) {
    throw ConfigError("payload shape does not match the scheme parameters");
  }
  if (KeyBitsForSetSize(key_set.size()) != payload.key_bit_count) {
    throw ConfigError("key set holds " + std::to_string(key_set.size()) +
                      " keys but the payload carries " +
                      std::to_string(payload.key_bit_count) + " key bits");
  }
  if (options.length < 1) throw ConfigError("generation length must be >= 1");
  const WatermarkKey& key = key_set[payload.key_bits];
  const std::size_t h = static_cast<std::size_t>(params.h);

  GenerationRecord record;
  record.payload = payload;
  record.tokens.reserve(options.length);
  record.steps.reserve(options.length);

  TokenSequence context(prompt.begin(), prompt.end());
  HistoryLog hist;
  for (std::size_t i = 0; i < options.length; ++i) {
    TokenDistribution original = [&] {
      try {
        return model.Next(context);
      } catch (const ModelError&) {
        throw;
      } catch (const std::exception& e) {
        throw ModelError(i, e.what());
      }
    }();
    if (original.size() != params.vocab_size) {
      throw ModelError(i, "model returned " + std::to_string(original.size()) +
                              " probabilities");
    }
    HashDrbg sampler(StepSeed(options.rng_seed, i));
    const double u = sampler.NextDouble();

    TokenId token;
    StepKind kind;
    if (context.size() < h) {
      token = SampleToken(original, u);
      kind = StepKind::kNoContext;
    } else {
      const TextureKey texture = DeriveTextureKey(context, h);
      const std::uint32_t pos = ChunkPosition(key, texture, i, params);
      if (!hist.Insert(texture)) {
        token = SampleToken(original, u);
        kind = StepKind::kRepeated;
      } else {
        const Permutation perm =
            GeneratePermutation(key, texture, params.vocab_size);
        const TokenDistribution marked = ReweightDistribution(
            original, perm, payload.chunks[pos], params.m);
        token = SampleToken(marked, u);
        kind = StepKind::kWatermarked;
      }
    }
    record.tokens.push_back(token);
    record.steps.push_back(kind);
    context.push_back(token);
  }
  return record;
}

GenerationRecord Encode(const LanguageModel& model,
                        std::span<const TokenId> prompt,
                        const WatermarkKey& key, const MessagePayload& payload,
                        const EncodeOptions& options) {
  if (payload.key_bit_count != 0) {
    throw ConfigError("payload carries key bits; use EncodeKeyIter");
  }
  return EncodeKeyIter(model, prompt, std::span<const WatermarkKey>(&key, 1),
                       payload, options);
}

RedCountTable::RedCountTable(int m_bits, int chunks)
    : m(m_bits),
      H(chunks),
      counts(static_cast<std::size_t>(chunks) << m_bits, 0),
      tokens_per_pos(static_cast<std::size_t>(chunks), 0) {}

RedCountTable CountRedHits(std::span<const TokenId> text,
                           const WatermarkKey& key,
                           const SchemeParams& params) {
  params.Validate();
  const std::size_t h = static_cast<std::size_t>(params.h);
  if (text.size() <= h) {
    throw InputError("text of " + std::to_string(text.size()) +
                     " tokens is too short for texture window " +
                     std::to_string(h));
  }
  RedCountTable table(params.m, params.H);
  HistoryLog hist;
  for (std::size_t i = h; i < text.size(); ++i) {
    const TokenId token = text[i];
    if (token >= params.vocab_size) {
      throw InputError("token id " + std::to_string(token) +
                       " is outside the vocabulary");
    }
    const TextureKey texture = DeriveTextureKey(text.first(i), h);
    if (!hist.Insert(texture) && params.skip_repeats) {
      ++table.skipped_repeats;
      continue;
    }
    const int pos = static_cast<int>(ChunkPosition(key, texture, i, params));
    const Permutation perm =
        GeneratePermutation(key, texture, params.vocab_size);
    const std::size_t rank = perm.RankOf(token);
    // The red lists partition the ranks, so exactly one value is hit.
    table.at(pos, MessageForRank(rank, params.m, params.vocab_size)) += 1;
    table.tokens_per_pos[static_cast<std::size_t>(pos)] += 1;
    ++table.counted_steps;
  }
  return table;
}

Extraction ExtractMessage(const RedCountTable& table) {
  Extraction out;
  out.chunks.resize(static_cast<std::size_t>(table.H));
  for (int pos = 0; pos < table.H; ++pos) {
    std::uint32_t best = 0;
    for (std::uint32_t msg = 1; msg < table.messages(); ++msg) {
      if (table.at(pos, msg) < table.at(pos, best)) best = msg;
    }
    out.chunks[static_cast<std::size_t>(pos)] = best;
    out.red_total += table.at(pos, best);
  }
  return out;
}

namespace {

struct ScoredPass {
  Extraction extraction;
  std::size_t counted_steps = 0;
  double z = 0.0;
};

ScoredPass ScorePass(std::span<const TokenId> text, const WatermarkKey& key,
                     const SchemeParams& params,
                     const NullCalibration& calibration) {
  const RedCountTable table = CountRedHits(text, key, params);
  ScoredPass pass;
  pass.extraction = ExtractMessage(table);
  pass.counted_steps = table.counted_steps;
  pass.z = (static_cast<double>(pass.extraction.red_total) - calibration.mu_R) /
           calibration.sigma_R;
  return pass;
}

DetectionResult Finish(const ScoredPass& pass, const SchemeParams& params,
                       int key_bit_count, std::uint32_t key_index,
                       std::size_t passes, double z_threshold) {
  DetectionResult r;
  r.extracted.m = params.m;
  r.extracted.chunks = pass.extraction.chunks;
  r.extracted.key_bit_count = key_bit_count;
  r.extracted.key_bits = key_index;
  r.red_total = pass.extraction.red_total;
  r.z = pass.z;
  r.p_value = NormalCdf(pass.z);
  r.decision = pass.z <= z_threshold;
  r.counted_steps = pass.counted_steps;
  r.counting_passes = passes;
  return r;
}

}  // namespace

DetectionResult Decode(std::span<const TokenId> text, const WatermarkKey& key,
                       const SchemeParams& params,
                       const NullCalibration& calibration,
                       double z_threshold) {
  return DecodeKeyIter(text, std::span<const WatermarkKey>(&key, 1), params,
                       calibration, z_threshold);
}

DetectionResult DecodeKeyIter(std::span<const TokenId> text,
                              std::span<const WatermarkKey> key_set,
                              const SchemeParams& params,
                              const NullCalibration& calibration,
                              double z_threshold) {
  if (key_set.empty()) throw ConfigError("key set is empty");
  const int key_bits = KeyBitsForSetSize(key_set.size());
  calibration.CheckCompatible(params, text.size());

  ScoredPass best = ScorePass(text, key_set[0], params, calibration);
  std::uint32_t best_index = 0;
  for (std::uint32_t k = 1; k < key_set.size(); ++k) {
    ScoredPass pass = ScorePass(text, key_set[k], params, calibration);
    if (pass.z < best.z) {
      best = std::move(pass);
      best_index = k;
    }
  }
  return Finish(best, params, key_bits, best_index, key_set.size(),
                z_threshold);
}

}  // namespace multimark
