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

#include "multimark/simlm.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "multimark/error.h"
#include "multimark/prf.h"
#include "multimark/sampling.h"

namespace multimark {
namespace {

std::uint64_t LoadBe64(const Digest& d) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d[static_cast<std::size_t>(i)];
  return v;
}

// Uniform in (0, 1) from the top 53 bits.
double OpenUnit(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

void SyntheticModelSpec::Validate() const {
  if (vocab_size < 2) throw ConfigError("synthetic vocabulary must be >= 2");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be positive and finite");
  }
  if (window < 0) throw ConfigError("context window must be non-negative");
}

SyntheticModel::SyntheticModel(SyntheticModelSpec spec)
    : spec_(std::move(spec)) {
  spec_.Validate();
}

std::string SyntheticModel::fingerprint() const {
  std::ostringstream out;
  out.precision(17);
  out << "simlm/1 vocab=" << spec_.vocab_size << " temperature="
      << spec_.temperature << " classes=" << spec_.context_classes
      << " window=" << spec_.window << " seed=" << spec_.seed;
  return out.str();
}

std::uint64_t SyntheticModel::ContextClass(
    std::span<const TokenId> context) const {
  const std::size_t w = std::min(context.size(),
                                 static_cast<std::size_t>(spec_.window));
  Sha256Builder b;
  b.Add("class").Add(spec_.seed).AddU32(static_cast<std::uint32_t>(w));
  for (TokenId t : context.last(w)) b.AddU32(t);
  const std::uint64_t v = LoadBe64(b.Finish());
  return spec_.context_classes == 0 ? v : v % spec_.context_classes;
}

TokenDistribution SyntheticModel::Next(std::span<const TokenId> context) const {
  Sha256Builder b;
  const Digest seed =
      b.Add("logits").Add(spec_.seed).AddU64(ContextClass(context)).Finish();
  std::mt19937_64 gen(LoadBe64(seed));

  const std::size_t V = spec_.vocab_size;
  std::vector<double> logits(V);
  // Box-Muller, both variates used.
  for (std::size_t i = 0; i < V; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(OpenUnit(gen)));
    const double theta = 2.0 * std::numbers::pi * OpenUnit(gen);
    logits[i] = r * std::cos(theta);
    if (i + 1 < V) logits[i + 1] = r * std::sin(theta);
  }

  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(V);
  for (std::size_t i = 0; i < V; ++i) {
    probs[i] = std::exp((logits[i] - top) / spec_.temperature);
  }
  return TokenDistribution(std::move(probs));
}

TokenSequence GeneratePlain(const LanguageModel& model,
                            std::span<const TokenId> prompt,
                            std::size_t length, std::string_view rng_seed) {
  TokenSequence context(prompt.begin(), prompt.end());
  TokenSequence out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const TokenDistribution dist = model.Next(context);
    HashDrbg sampler(StepSeed(rng_seed, i));
    const TokenId token = SampleToken(dist, sampler.NextDouble());
    out.push_back(token);
    context.push_back(token);
  }
  return out;
}

double MeasuredRepetition(std::span<const TokenId> tokens, std::size_t h) {
  if (tokens.size() <= h) {
    throw InputError("text must be longer than the texture window");
  }
  std::unordered_set<TextureKey, TextureKeyHash> seen;
  std::size_t repeats = 0;
  for (std::size_t i = h; i < tokens.size(); ++i) {
    if (!seen.insert(DeriveTextureKey(tokens.first(i), h)).second) ++repeats;
  }
  return static_cast<double>(repeats) /
         static_cast<double>(tokens.size() - h);
}

}  // namespace multimark
