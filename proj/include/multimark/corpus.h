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

// Corpus files are JSON lines, one text per line:
//
//   {"schema_version":1,"layout":1,"vocab_size":256,"h":3,"m":1,"H":24,
//    "m_key":0,"lead_in":0,"tokens":[...],"payload_bits":"0101...",
//    "flags":"cwwr..."}
//
// "payload_bits" and "flags" are present only for watermarked output.
// Calibration files are single JSON objects.

#ifndef MULTIMARK_CORPUS_H_
#define MULTIMARK_CORPUS_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multimark/calibration.h"
#include "multimark/codec.h"
#include "multimark/scheme.h"
#include "multimark/types.h"

namespace multimark {

inline constexpr int kCorpusSchemaVersion = 1;
inline constexpr int kCalibrationSchemaVersion = 1;

struct CorpusRecord {
  std::size_t vocab_size = 0;
  int h = 3;
  int m = 1;
  int H = 1;
  int key_bit_count = 0;
  int lead_in = 0;
  TokenSequence tokens;
  std::optional<std::string> payload_bits;
  std::optional<std::string> flags;

  static CorpusRecord FromGeneration(const GenerationRecord& generation,
                                     const SchemeParams& params);
  static CorpusRecord Plain(TokenSequence tokens, const SchemeParams& params,
                            int key_bit_count = 0);
  // Decoded payload, or nullopt for plain records.
  std::optional<MessagePayload> Payload() const;
  // Throws FormatError when the record disagrees with `params`.
  void CheckMatches(const SchemeParams& params, int key_bit_count) const;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

std::string CorpusRecordToJson(const CorpusRecord& record);
// Throws FormatError on malformed or unsupported records.
CorpusRecord CorpusRecordFromJson(std::string_view line);

std::vector<CorpusRecord> ReadCorpus(std::istream& in);
void WriteCorpus(std::ostream& out, std::span<const CorpusRecord> records);
std::vector<CorpusRecord> ReadCorpusFile(const std::string& path);
void WriteCorpusFile(const std::string& path,
                     std::span<const CorpusRecord> records);

std::string CalibrationToJson(const NullCalibration& calibration);
NullCalibration CalibrationFromJson(std::string_view text);
void SaveCalibration(const std::string& path,
                     const NullCalibration& calibration);
NullCalibration LoadCalibration(const std::string& path);

}  // namespace multimark

#endif  // MULTIMARK_CORPUS_H_
