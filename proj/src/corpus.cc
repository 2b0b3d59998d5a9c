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

#include "multimark/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "multimark/error.h"
#include "multimark/payload.h"

namespace multimark {
namespace {

using nlohmann::ordered_json;

template <typename T>
T Field(const ordered_json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw FormatError(std::string("missing field '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + name + "' has the wrong type");
  }
}

ordered_json Parse(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

CorpusRecord CorpusRecord::FromGeneration(const GenerationRecord& generation,
                                          const SchemeParams& params) {
  CorpusRecord r = Plain(generation.tokens, params,
                         generation.payload.key_bit_count);
  r.payload_bits = generation.payload.ToBits();
  r.flags = generation.StepCodes();
  return r;
}

CorpusRecord CorpusRecord::Plain(TokenSequence tokens,
                                 const SchemeParams& params,
                                 int key_bit_count) {
  CorpusRecord r;
  r.vocab_size = params.vocab_size;
  r.h = params.h;
  r.m = params.m;
  r.H = params.H;
  r.key_bit_count = key_bit_count;
  r.lead_in = params.lead_in;
  r.tokens = std::move(tokens);
  return r;
}

std::optional<MessagePayload> CorpusRecord::Payload() const {
  if (!payload_bits) return std::nullopt;
  return MessagePayload::FromBits(*payload_bits, m, H, key_bit_count);
}

void CorpusRecord::CheckMatches(const SchemeParams& params,
                                int key_bits) const {
  if (vocab_size != params.vocab_size || h != params.h || m != params.m ||
      H != params.H || lead_in != params.lead_in || key_bit_count != key_bits) {
    throw FormatError(
        "corpus record was written with different scheme parameters");
  }
}

std::string CorpusRecordToJson(const CorpusRecord& record) {
  ordered_json j;
  j["schema_version"] = kCorpusSchemaVersion;
  j["layout"] = kPayloadLayoutVersion;
  j["vocab_size"] = record.vocab_size;
  j["h"] = record.h;
  j["m"] = record.m;
  j["H"] = record.H;
  j["m_key"] = record.key_bit_count;
  j["lead_in"] = record.lead_in;
  j["tokens"] = record.tokens;
  if (record.payload_bits) j["payload_bits"] = *record.payload_bits;
  if (record.flags) j["flags"] = *record.flags;
  return j.dump();
}

CorpusRecord CorpusRecordFromJson(std::string_view line) {
  const ordered_json j = Parse(line);
  if (!j.is_object()) throw FormatError("corpus record must be an object");
  const int version = Field<int>(j, "schema_version");
  if (version != kCorpusSchemaVersion) {
    throw FormatError("unsupported corpus schema version " +
                      std::to_string(version));
  }
  const int layout = Field<int>(j, "layout");
  if (layout != kPayloadLayoutVersion) {
    throw FormatError("unsupported payload layout " + std::to_string(layout));
  }
  CorpusRecord r;
  r.vocab_size = Field<std::size_t>(j, "vocab_size");
  r.h = Field<int>(j, "h");
  r.m = Field<int>(j, "m");
  r.H = Field<int>(j, "H");
  r.key_bit_count = Field<int>(j, "m_key");
  r.lead_in = Field<int>(j, "lead_in");
  r.tokens = Field<TokenSequence>(j, "tokens");
  if (j.contains("payload_bits")) {
    r.payload_bits = Field<std::string>(j, "payload_bits");
    r.Payload();  // validates the bit string
  }
  if (j.contains("flags")) {
    r.flags = Field<std::string>(j, "flags");
    for (char c : *r.flags) StepKindFromCode(c);
  }
  for (TokenId t : r.tokens) {
    if (t >= r.vocab_size) throw FormatError("token id outside vocabulary");
  }
  return r;
}

std::vector<CorpusRecord> ReadCorpus(std::istream& in) {
  std::vector<CorpusRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(CorpusRecordFromJson(line));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void WriteCorpus(std::ostream& out, std::span<const CorpusRecord> records) {
  for (const CorpusRecord& r : records) out << CorpusRecordToJson(r) << '\n';
}

std::vector<CorpusRecord> ReadCorpusFile(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadCorpus(in);
}

void WriteCorpusFile(const std::string& path,
                     std::span<const CorpusRecord> records) {
  std::ofstream out = OpenOut(path);
  WriteCorpus(out, records);
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string CalibrationToJson(const NullCalibration& c) {
  ordered_json j;
  j["schema_version"] = kCalibrationSchemaVersion;
  const CalibrationFingerprint& f = c.fingerprint;
  j["fingerprint"] = {{"vocab_size", f.vocab_size},
                      {"h", f.h},
                      {"m", f.m},
                      {"H", f.H},
                      {"lead_in", f.lead_in},
                      {"skip_repeats", f.skip_repeats},
                      {"length_bucket", f.length_bucket}};
  j["mu_R"] = c.mu_R;
  j["sigma_R"] = c.sigma_R;
  j["n_samples"] = c.n_samples;
  return j.dump(2);
}

NullCalibration CalibrationFromJson(std::string_view text) {
  const ordered_json j = Parse(text);
  if (!j.is_object()) throw FormatError("calibration must be an object");
  const int version = Field<int>(j, "schema_version");
  if (version != kCalibrationSchemaVersion) {
    throw FormatError("unsupported calibration schema version " +
                      std::to_string(version));
  }
  const ordered_json f = Field<ordered_json>(j, "fingerprint");
  NullCalibration c;
  c.fingerprint.vocab_size = Field<std::size_t>(f, "vocab_size");
  c.fingerprint.h = Field<int>(f, "h");
  c.fingerprint.m = Field<int>(f, "m");
  c.fingerprint.H = Field<int>(f, "H");
  c.fingerprint.lead_in = Field<int>(f, "lead_in");
  c.fingerprint.skip_repeats = Field<bool>(f, "skip_repeats");
  c.fingerprint.length_bucket = Field<int>(f, "length_bucket");
  c.mu_R = Field<double>(j, "mu_R");
  c.sigma_R = Field<double>(j, "sigma_R");
  c.n_samples = Field<std::size_t>(j, "n_samples");
  if (c.n_samples < NullCalibration::kMinSamples || !(c.sigma_R > 0.0)) {
    throw CalibrationError("calibration file holds an invalid calibration");
  }
  return c;
}

void SaveCalibration(const std::string& path, const NullCalibration& c) {
  std::ofstream out = OpenOut(path);
  out << CalibrationToJson(c) << '\n';
  if (!out) throw InputError("failed writing '" + path + "'");
}

NullCalibration LoadCalibration(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::ostringstream text;
  text << in.rdbuf();
  return CalibrationFromJson(text.str());
}

}  // namespace multimark
