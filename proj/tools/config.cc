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

#include "config.h"

#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "multimark/codec.h"
#include "multimark/error.h"
#include "multimark/prf.h"
#include "multimark/stdio_model.h"

namespace multimark::cli {
namespace {

using nlohmann::ordered_json;

template <typename T>
void Read(const ordered_json& j, const char* name, T& into) {
  const auto it = j.find(name);
  if (it == j.end()) return;
  try {
    into = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + name +
                      "' has the wrong type");
  }
}

void CheckKnown(const ordered_json& j, const std::set<std::string>& known,
                const std::string& where) {
  for (const auto& [name, value] : j.items()) {
    if (!known.contains(name)) {
      throw ConfigError("unknown " + where + " field '" + name + "'");
    }
  }
}

}  // namespace

SchemeParams RunConfig::Scheme(std::size_t vocab_size) const {
  SchemeParams p;
  p.vocab_size = vocab_size;
  p.h = h;
  p.m = m;
  p.H = H;
  p.lead_in = lead_in;
  p.skip_repeats = skip_repeats;
  p.Validate();
  return p;
}

Metadata RunConfig::MetadataFor(std::size_t text_index) const {
  Metadata md;
  md.user_id = user_id;
  md.user_bits = user_bits;
  md.model_id = model_id;
  md.model_bits = model_bits;
  md.timestamp_bits = timestamp_bits;
  const std::uint64_t base =
      timestamp ? *timestamp : static_cast<std::uint64_t>(std::time(nullptr));
  std::uint64_t ts = base + text_index;
  if (timestamp_bits < 64) ts &= (std::uint64_t{1} << timestamp_bits) - 1;
  md.timestamp = ts;
  return md;
}

TokenSequence RunConfig::PromptFor(std::size_t text_index,
                                   std::size_t vocab) const {
  if (!prompt.empty()) {
    for (TokenId t : prompt) {
      if (t >= vocab) throw ConfigError("prompt token outside the vocabulary");
    }
    return prompt;
  }
  Sha256Builder b;
  HashDrbg rng(b.Add("prompt").Add(seed).AddU64(text_index).Finish());
  TokenSequence out(static_cast<std::size_t>(h));
  for (TokenId& t : out) t = rng.Uniform(static_cast<std::uint32_t>(vocab));
  return out;
}

RunConfig RunConfigFromJson(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  int version = 0;
  Read(j, "schema_version", version);
  if (version != kRunConfigSchemaVersion) {
    throw ConfigError("config schema_version must be " +
                      std::to_string(kRunConfigSchemaVersion));
  }
  CheckKnown(j,
             {"schema_version", "key", "key_set", "h", "m", "H", "m_key",
              "lead_in", "skip_repeats", "length", "texts", "z_threshold",
              "seed", "key_index", "user_id", "user_bits", "model_id",
              "model_bits", "timestamp", "timestamp_bits", "prompt", "model",
              "input", "output", "calibration", "csv", "summary", "workers"},
             "config");
  RunConfig c;
  Read(j, "key", c.key_path);
  Read(j, "key_set", c.key_set_path);
  Read(j, "h", c.h);
  Read(j, "m", c.m);
  Read(j, "H", c.H);
  Read(j, "m_key", c.m_key);
  Read(j, "lead_in", c.lead_in);
  Read(j, "skip_repeats", c.skip_repeats);
  Read(j, "length", c.length);
  Read(j, "texts", c.texts);
  Read(j, "z_threshold", c.z_threshold);
  Read(j, "seed", c.seed);
  Read(j, "key_index", c.key_index);
  Read(j, "user_id", c.user_id);
  Read(j, "user_bits", c.user_bits);
  Read(j, "model_id", c.model_id);
  Read(j, "model_bits", c.model_bits);
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    std::uint64_t ts = 0;
    Read(j, "timestamp", ts);
    c.timestamp = ts;
  }
  Read(j, "timestamp_bits", c.timestamp_bits);
  Read(j, "prompt", c.prompt);
  Read(j, "input", c.input);
  Read(j, "output", c.output);
  Read(j, "calibration", c.calibration);
  Read(j, "csv", c.csv);
  Read(j, "summary", c.summary);
  Read(j, "workers", c.workers);
  if (j.contains("model")) {
    const ordered_json& mj = j["model"];
    if (!mj.is_object()) throw ConfigError("config 'model' must be an object");
    CheckKnown(mj,
               {"type", "vocab_size", "temperature", "context_classes", "seed",
                "window", "command"},
               "model");
    std::string type = "synthetic";
    Read(mj, "type", type);
    if (type == "synthetic") {
      c.model.kind = ModelSelector::Kind::kSynthetic;
      SyntheticModelSpec& s = c.model.synthetic;
      Read(mj, "vocab_size", s.vocab_size);
      Read(mj, "temperature", s.temperature);
      Read(mj, "context_classes", s.context_classes);
      Read(mj, "seed", s.seed);
      Read(mj, "window", s.window);
    } else if (type == "command") {
      c.model.kind = ModelSelector::Kind::kCommand;
      Read(mj, "command", c.model.command);
    } else {
      throw ConfigError("unknown model type '" + type + "'");
    }
  }
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return RunConfigFromJson(text.str());
}

std::string RunConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["schema_version"] = kRunConfigSchemaVersion;
  j["key"] = c.key_path;
  j["key_set"] = c.key_set_path;
  j["h"] = c.h;
  j["m"] = c.m;
  j["H"] = c.H;
  j["m_key"] = c.m_key;
  j["lead_in"] = c.lead_in;
  j["skip_repeats"] = c.skip_repeats;
  j["length"] = c.length;
  j["texts"] = c.texts;
  j["z_threshold"] = c.z_threshold;
  j["seed"] = c.seed;
  j["key_index"] = c.key_index;
  j["user_id"] = c.user_id;
  j["user_bits"] = c.user_bits;
  j["model_id"] = c.model_id;
  j["model_bits"] = c.model_bits;
  j["timestamp"] = c.timestamp ? ordered_json(*c.timestamp) : ordered_json();
  j["timestamp_bits"] = c.timestamp_bits;
  j["prompt"] = c.prompt;
  ordered_json mj;
  if (c.model.kind == ModelSelector::Kind::kSynthetic) {
    const SyntheticModelSpec& s = c.model.synthetic;
    mj["type"] = "synthetic";
    mj["vocab_size"] = s.vocab_size;
    mj["temperature"] = s.temperature;
    mj["context_classes"] = s.context_classes;
    mj["seed"] = s.seed;
    mj["window"] = s.window;
  } else {
    mj["type"] = "command";
    mj["command"] = c.model.command;
  }
  j["model"] = mj;
  j["input"] = c.input;
  j["output"] = c.output;
  j["calibration"] = c.calibration;
  j["csv"] = c.csv;
  j["summary"] = c.summary;
  j["workers"] = c.workers;
  return j.dump(2);
}

std::vector<WatermarkKey> LoadKeys(const RunConfig& config) {
  if (config.m_key < 0 || config.m_key > 16) {
    throw ConfigError("m_key must be in [0, 16]");
  }
  if (config.m_key == 0) {
    if (!config.key_path.empty()) {
      return {WatermarkKey::LoadFile(config.key_path)};
    }
    if (!config.key_set_path.empty()) {
      std::vector<WatermarkKey> set = LoadKeySet(config.key_set_path);
      if (set.size() != 1) {
        throw ConfigError("m_key = 0 needs a single key, key set holds " +
                          std::to_string(set.size()));
      }
      return set;
    }
    throw ConfigError("no key given; use --key or " + std::string(kKeyEnvVar));
  }
  const std::string& path =
      config.key_set_path.empty() ? config.key_path : config.key_set_path;
  if (path.empty()) throw ConfigError("m_key > 0 needs a key set file");
  std::vector<WatermarkKey> set = LoadKeySet(path);
  const std::size_t want = std::size_t{1} << config.m_key;
  if (set.size() != want) {
    throw ConfigError("m_key = " + std::to_string(config.m_key) + " needs " +
                      std::to_string(want) + " keys, key set holds " +
                      std::to_string(set.size()));
  }
  return set;
}

std::unique_ptr<LanguageModel> MakeModel(const ModelSelector& selector) {
  if (selector.kind == ModelSelector::Kind::kSynthetic) {
    return std::make_unique<SyntheticModel>(selector.synthetic);
  }
  return StdioModel::Spawn(selector.command);
}

}  // namespace multimark::cli
