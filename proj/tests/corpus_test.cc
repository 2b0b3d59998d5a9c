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


#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "multimark/corpus.h"
#include "multimark/error.h"

namespace multimark {
namespace {

using testing::Params;

CorpusRecord Sample() {
  GenerationRecord g;
  g.tokens = {5, 6, 7, 8, 9};
  g.steps = {StepKind::kNoContext, StepKind::kWatermarked,
             StepKind::kWatermarked, StepKind::kRepeated,
             StepKind::kWatermarked};
  g.payload.m = 2;
  g.payload.chunks = {1, 3, 0};
  g.payload.key_bit_count = 1;
  g.payload.key_bits = 1;
  SchemeParams p = Params(16, 2, 3, 2);
  p.lead_in = 1;
  return CorpusRecord::FromGeneration(g, p);
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("multimark_corpus_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CorpusRecord, FromGenerationKeepsEverything) {
  const CorpusRecord r = Sample();
  EXPECT_EQ(r.vocab_size, 16u);
  EXPECT_EQ(r.h, 2);
  EXPECT_EQ(r.lead_in, 1);
  EXPECT_EQ(r.key_bit_count, 1);
  EXPECT_EQ(r.flags, "cwwrw");
  EXPECT_EQ(r.payload_bits, "0111001");
  const MessagePayload p = *r.Payload();
  EXPECT_EQ(p.chunks, (std::vector<std::uint32_t>{1, 3, 0}));
  EXPECT_EQ(p.key_bits, 1u);
}

TEST(CorpusRecord, JsonRoundTrip) {
  const CorpusRecord r = Sample();
  const std::string line = CorpusRecordToJson(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(CorpusRecordFromJson(line), r);
  const CorpusRecord plain = CorpusRecord::Plain({1, 2, 3}, Params(16, 1, 1));
  EXPECT_EQ(CorpusRecordFromJson(CorpusRecordToJson(plain)), plain);
  EXPECT_FALSE(plain.Payload().has_value());
}

TEST(CorpusRecord, FieldLayout) {
  const std::string line =
      CorpusRecordToJson(CorpusRecord::Plain({1, 2}, Params(16, 1, 1)));
  EXPECT_EQ(line,
            "{\"schema_version\":1,\"layout\":1,\"vocab_size\":16,\"h\":3,"
            "\"m\":1,\"H\":1,\"m_key\":0,\"lead_in\":0,\"tokens\":[1,2]}");
}

TEST(CorpusRecord, RejectsMalformedRecords) {
  const std::string base =
      "{\"schema_version\":1,\"layout\":1,\"vocab_size\":16,\"h\":3,"
      "\"m\":1,\"H\":2,\"m_key\":0,\"lead_in\":0,\"tokens\":[1,2]";
  EXPECT_NO_THROW(CorpusRecordFromJson(base + "}"));
  EXPECT_THROW(CorpusRecordFromJson(base), FormatError);
  EXPECT_THROW(CorpusRecordFromJson("[1,2]"), FormatError);
  EXPECT_THROW(CorpusRecordFromJson(base + ",\"payload_bits\":\"011\"}"),
               FormatError);
  EXPECT_THROW(CorpusRecordFromJson(base + ",\"payload_bits\":\"0a\"}"),
               FormatError);
  EXPECT_THROW(CorpusRecordFromJson(base + ",\"flags\":\"wwq\"}"), FormatError);
  EXPECT_THROW(
      CorpusRecordFromJson(
          "{\"schema_version\":2,\"layout\":1,\"vocab_size\":16,\"h\":3,"
          "\"m\":1,\"H\":2,\"m_key\":0,\"lead_in\":0,\"tokens\":[1]}"),
      FormatError);
  EXPECT_THROW(
      CorpusRecordFromJson(
          "{\"schema_version\":1,\"layout\":1,\"vocab_size\":16,\"h\":3,"
          "\"m\":1,\"H\":2,\"m_key\":0,\"lead_in\":0,\"tokens\":[16]}"),
      FormatError);
  EXPECT_THROW(
      CorpusRecordFromJson(
          "{\"schema_version\":1,\"layout\":1,\"vocab_size\":16,\"h\":\"3\","
          "\"m\":1,\"H\":2,\"m_key\":0,\"lead_in\":0,\"tokens\":[1]}"),
      FormatError);
}

TEST(CorpusRecord, CheckMatches) {
  const CorpusRecord r = Sample();
  SchemeParams p = Params(16, 2, 3, 2);
  p.lead_in = 1;
  EXPECT_NO_THROW(r.CheckMatches(p, 1));
  EXPECT_THROW(r.CheckMatches(p, 0), FormatError);
  p.H = 4;
  EXPECT_THROW(r.CheckMatches(p, 1), FormatError);
}

TEST(Corpus, StreamRoundTripSkipsBlankLines) {
  const std::vector<CorpusRecord> records = {
      Sample(), CorpusRecord::Plain({0, 1, 2, 3}, Params(16, 1, 1))};
  std::stringstream s;
  WriteCorpus(s, records);
  const std::string text = s.str() + "\n  \n";
  std::istringstream in(text);
  EXPECT_EQ(ReadCorpus(in), records);
}

TEST(Corpus, ReportsLineNumbers) {
  std::istringstream in(CorpusRecordToJson(Sample()) + "\n{oops\n");
  try {
    ReadCorpus(in);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Corpus, FileRoundTrip) {
  const auto path = TempPath("corpus.jsonl").string();
  const std::vector<CorpusRecord> records = {Sample(), Sample()};
  WriteCorpusFile(path, records);
  EXPECT_EQ(ReadCorpusFile(path), records);
  std::filesystem::remove(path);
  EXPECT_THROW(ReadCorpusFile(path), InputError);
}

NullCalibration SampleCalibration() {
  NullCalibration c;
  c.mu_R = 114.40999999999999;
  c.sigma_R = 4.7812345678901234;
  c.n_samples = 1000;
  c.fingerprint = CalibrationFingerprint::For(Params(256, 1, 24), 300);
  return c;
}

TEST(Calibration, JsonRoundTripIsExact) {
  const NullCalibration c = SampleCalibration();
  const NullCalibration back = CalibrationFromJson(CalibrationToJson(c));
  EXPECT_EQ(back.mu_R, c.mu_R);
  EXPECT_EQ(back.sigma_R, c.sigma_R);
  EXPECT_EQ(back.n_samples, c.n_samples);
  EXPECT_EQ(back.fingerprint, c.fingerprint);
}

TEST(Calibration, FileRoundTrip) {
  const auto path = TempPath("cal.json").string();
  SaveCalibration(path, SampleCalibration());
  EXPECT_EQ(LoadCalibration(path).mu_R, SampleCalibration().mu_R);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadCalibration(path), InputError);
}

TEST(Calibration, RejectsInvalidFiles) {
  NullCalibration c = SampleCalibration();
  c.n_samples = 50;
  EXPECT_THROW(CalibrationFromJson(CalibrationToJson(c)), CalibrationError);
  c = SampleCalibration();
  c.sigma_R = 0.0;
  EXPECT_THROW(CalibrationFromJson(CalibrationToJson(c)), CalibrationError);
  EXPECT_THROW(CalibrationFromJson("{\"schema_version\":1}"), FormatError);
  EXPECT_THROW(CalibrationFromJson("not json"), FormatError);
}

TEST(Calibration, CompatibilityChecks) {
  const NullCalibration c = SampleCalibration();
  EXPECT_NO_THROW(c.CheckCompatible(Params(256, 1, 24), 300));
  EXPECT_NO_THROW(c.CheckCompatible(Params(256, 1, 24), 500));
  EXPECT_THROW(c.CheckCompatible(Params(256, 1, 24), 200), CalibrationError);
  EXPECT_THROW(c.CheckCompatible(Params(256, 2, 24), 300), CalibrationError);
  SchemeParams counting = Params(256, 1, 24);
  counting.skip_repeats = false;
  EXPECT_THROW(c.CheckCompatible(counting, 300), CalibrationError);
  EXPECT_THROW(NullCalibration{}.CheckCompatible(Params(256, 1, 24), 300),
               CalibrationError);
}

}  // namespace
}  // namespace multimark
