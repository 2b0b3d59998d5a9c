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

#ifndef MULTIMARK_TOOLS_CONFIG_H_
#define MULTIMARK_TOOLS_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "multimark/key.h"
#include "multimark/model.h"
#include "multimark/payload.h"
#include "multimark/scheme.h"
#include "multimark/simlm.h"

namespace multimark::cli {

inline constexpr int kRunConfigSchemaVersion = 1;
inline constexpr const char* kKeyEnvVar = "MULTIMARK_KEY";

struct ModelSelector {
  enum class Kind { kSynthetic, kCommand };
  Kind kind = Kind::kSynthetic;
  SyntheticModelSpec synthetic;
  std::vector<std::string> command;  // argv of a protocol server
};

struct RunConfig {
  // Keys. key_path holds one key; key_set_path one hex key per line.
  std::string key_path;
  std::string key_set_path;

  int h = 3;
  int m = 1;
  int H = 24;
  int m_key = 0;
  int lead_in = 0;
  bool skip_repeats = true;
  std::size_t length = 300;
  std::size_t texts = 10;
  double z_threshold = -4.0;
  std::string seed = "run";
  std::uint32_t key_index = 0;

  // Payload metadata. With no pinned timestamp the wall clock is used.
  std::uint64_t user_id = 0;
  int user_bits = 8;
  std::uint64_t model_id = 0;
  int model_bits = 8;
  std::optional<std::uint64_t> timestamp;
  int timestamp_bits = 8;

  std::vector<TokenId> prompt;  // empty: h pseudorandom tokens per text

  ModelSelector model;

  std::string input;
  std::string output;
  std::string calibration;
  std::string csv;
  std::string summary;
  std::size_t workers = 1;

  SchemeParams Scheme(std::size_t vocab_size) const;
  Metadata MetadataFor(std::size_t text_index) const;
  // Prompt of text i: the pinned prompt or h tokens drawn from the seed.
  TokenSequence PromptFor(std::size_t text_index, std::size_t vocab) const;
};

// Throws ConfigError on unknown fields, wrong types or schema mismatch.
RunConfig LoadRunConfig(const std::string& path);
RunConfig RunConfigFromJson(std::string_view text);
std::string RunConfigToJson(const RunConfig& config);

// Key set for the configured m'. A single key when m' = 0; the key set file
// otherwise, which must hold exactly 2^m' keys. The key path may come from
// the MULTIMARK_KEY environment variable when not given explicitly.
std::vector<WatermarkKey> LoadKeys(const RunConfig& config);

std::unique_ptr<LanguageModel> MakeModel(const ModelSelector& selector);

}  // namespace multimark::cli

#endif  // MULTIMARK_TOOLS_CONFIG_H_
