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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "json.hpp"
#include "multimark/codec.h"
#include "multimark/error.h"
#include "multimark/stdio_model.h"

namespace multimark {
namespace {

using testing::MakeModel;
using testing::Params;
using testing::PromptFor;
using testing::RandomPayload;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

TEST(ServeModel, HandshakeThenAnswers) {
  const SyntheticModel model = MakeModel(8);
  std::istringstream in("{\"ctx\":[1,2,3]}\n\n{\"ctx\":[]}\n");
  std::ostringstream out;
  EXPECT_TRUE(ServeModel(model, in, out));
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 3u);
  const Handshake h = HandshakeFromJson(lines[0]);
  EXPECT_EQ(h.vocab_size, 8u);
  EXPECT_EQ(h.fingerprint, model.fingerprint());
  const TokenDistribution d = ProbsFromJson(lines[1], 8);
  const TokenDistribution want = model.Next(TokenSequence{1, 2, 3});
  for (TokenId t = 0; t < 8; ++t) EXPECT_NEAR(d[t], want[t], 1e-15);
  EXPECT_NO_THROW(ProbsFromJson(lines[2], 8));
}

TEST(ServeModel, MalformedRequestsAreRecoverable) {
  const SyntheticModel model = MakeModel(8);
  std::istringstream in(
      "not json\n{\"ctx\":[1,99]}\n{\"ctx\":[-1]}\n{\"tokens\":[]}\n"
      "{\"ctx\":[4]}\n");
  std::ostringstream out;
  EXPECT_TRUE(ServeModel(model, in, out));
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 6u);
  for (int i = 1; i <= 4; ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    ASSERT_TRUE(j.contains("error")) << lines[i];
    EXPECT_EQ(j["error"]["kind"], "protocol");
    EXPECT_EQ(j["error"]["fatal"], false);
    EXPECT_THROW(ProbsFromJson(lines[i], 8), ProtocolError);
  }
  EXPECT_NO_THROW(ProbsFromJson(lines[5], 8));
}

TEST(ServeModel, ModelFailureIsFatal) {
  class Failing final : public LanguageModel {
   public:
    std::size_t vocab_size() const override { return 4; }
    std::string fingerprint() const override { return "failing"; }
    TokenDistribution Next(std::span<const TokenId>) const override {
      throw std::runtime_error("out of memory");
    }
  } model;
  std::istringstream in("{\"ctx\":[1]}\n{\"ctx\":[2]}\n");
  std::ostringstream out;
  EXPECT_FALSE(ServeModel(model, in, out));
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 2u);
  const auto j = nlohmann::json::parse(lines[1]);
  EXPECT_EQ(j["error"]["kind"], "model");
  EXPECT_EQ(j["error"]["fatal"], true);
}

TEST(Protocol, RequestRoundTrip) {
  const TokenSequence ctx = {0, 5, 7};
  EXPECT_EQ(RequestToJson(ctx), "{\"ctx\":[0,5,7]}");
  EXPECT_EQ(RequestFromJson(RequestToJson(ctx), 8), ctx);
  EXPECT_THROW(RequestFromJson(RequestToJson(ctx), 7), ProtocolError);
  EXPECT_THROW(RequestFromJson("{\"ctx\":[1.5]}", 8), ProtocolError);
}

TEST(Protocol, HandshakeValidation) {
  EXPECT_THROW(HandshakeFromJson("{\"vocab_size\":1,\"fingerprint\":\"x\"}"),
               ProtocolError);
  EXPECT_THROW(HandshakeFromJson("{\"vocab_size\":4}"), ProtocolError);
  EXPECT_THROW(HandshakeFromJson("hello"), ProtocolError);
  const Handshake h = HandshakeFromJson(HandshakeToJson({16, "abc"}));
  EXPECT_EQ(h.vocab_size, 16u);
  EXPECT_EQ(h.fingerprint, "abc");
}

TEST(Protocol, ProbabilityValidation) {
  double drift = -1.0;
  const TokenDistribution d =
      ProbsFromJson("{\"probs\":[0.25,0.25,0.25,0.2500005]}", 4, &drift);
  EXPECT_NEAR(drift, 5e-7, 1e-12);
  EXPECT_NEAR(d[3], 0.2500005 / 1.0000005, 1e-15);
  EXPECT_THROW(ProbsFromJson("{\"probs\":[0.25,0.25,0.25,0.26]}", 4),
               ProtocolError);
  EXPECT_THROW(ProbsFromJson("{\"probs\":[0.5,0.5]}", 4), ProtocolError);
  EXPECT_THROW(ProbsFromJson("{\"probs\":[1.5,-0.5]}", 2), ProtocolError);
  EXPECT_THROW(ProbsFromJson("{\"probs\":[\"a\",1]}", 2), ProtocolError);
  EXPECT_THROW(ProbsFromJson(ErrorToJson("model", "boom", true), 2),
               ProtocolError);
  EXPECT_THROW(ProbsFromJson("[0.5,0.5]", 2), ProtocolError);
}

std::vector<std::string> ServeCommand(std::size_t vocab, double temperature) {
  return {MULTIMARK_CLI_PATH, "serve", "--vocab", std::to_string(vocab),
          "--temperature", std::to_string(temperature)};
}

TEST(StdioModel, MatchesInProcessModel) {
  const auto remote = StdioModel::Spawn(ServeCommand(64, 0.5));
  const SyntheticModel local = MakeModel(64, 0.5);
  EXPECT_EQ(remote->vocab_size(), 64u);
  EXPECT_EQ(remote->fingerprint(), local.fingerprint());
  for (std::size_t i = 0; i < 20; ++i) {
    const TokenSequence ctx = PromptFor(i, 64, 1 + i % 5);
    const TokenDistribution a = remote->Next(ctx);
    const TokenDistribution b = local.Next(ctx);
    for (TokenId t = 0; t < 64; ++t) ASSERT_NEAR(a[t], b[t], 1e-15);
  }
  EXPECT_EQ(remote->responses(), 20u);
  EXPECT_LT(remote->max_drift(), 1e-12);
}

TEST(StdioModel, EncodeAndDecodeAgreeWithInProcessModel) {
  const auto remote = StdioModel::Spawn(ServeCommand(64, 1.0));
  const SyntheticModel local = MakeModel(64, 1.0);
  const SchemeParams params = Params(64, 1, 4);
  const WatermarkKey key = WatermarkKey::FromLabel("protocol");
  EncodeOptions o;
  o.params = params;
  o.length = 150;
  o.rng_seed = "proto";
  const MessagePayload payload = RandomPayload(1, 4, 8);
  const GenerationRecord a = Encode(*remote, PromptFor(0, 64), key, payload, o);
  const GenerationRecord b = Encode(local, PromptFor(0, 64), key, payload, o);
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.StepCodes(), b.StepCodes());
  const Extraction ea = ExtractMessage(CountRedHits(a.tokens, key, params));
  const Extraction eb = ExtractMessage(CountRedHits(b.tokens, key, params));
  EXPECT_EQ(ea.chunks, eb.chunks);
  EXPECT_EQ(ea.red_total, eb.red_total);
}

TEST(StdioModel, ReportsBrokenServers) {
  EXPECT_THROW(StdioModel::Spawn({}), ConfigError);
  EXPECT_THROW(StdioModel::Spawn({"/nonexistent/model-server"}), ProtocolError);
  EXPECT_THROW(StdioModel::Spawn({"/bin/sh", "-c", "echo hello"}),
               ProtocolError);
  const auto lossy = StdioModel::Spawn(
      {"/bin/sh", "-c",
       "echo '{\"vocab_size\":4,\"fingerprint\":\"lossy\"}'; read l; "
       "echo '{\"probs\":[0.5,0.5,0.5,0.5]}'; read l"});
  EXPECT_EQ(lossy->fingerprint(), "lossy");
  EXPECT_THROW(lossy->Next(TokenSequence{1}), ProtocolError);
  const auto quitter = StdioModel::Spawn(
      {"/bin/sh", "-c", "echo '{\"vocab_size\":4,\"fingerprint\":\"q\"}'"});
  EXPECT_THROW(quitter->Next(TokenSequence{1}), ProtocolError);
}

}  // namespace
}  // namespace multimark
