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

// Line-delimited JSON model protocol over standard streams.
//
//   server -> {"vocab_size": V, "fingerprint": "..."}       once, first
//   client -> {"ctx": [token ids]}
//   server -> {"probs": [V reals]}
//          |  {"error": {"kind": "...", "message": "...", "fatal": bool}}
//
// Probability vectors must sum to 1 within kProtocolSumTolerance. The client
// renormalizes accepted vectors and keeps track of the largest drift seen.

#ifndef MULTIMARK_STDIO_MODEL_H_
#define MULTIMARK_STDIO_MODEL_H_

#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "multimark/model.h"

namespace multimark {

inline constexpr double kProtocolSumTolerance = 1e-6;

struct Handshake {
  std::size_t vocab_size = 0;
  std::string fingerprint;
};

std::string HandshakeToJson(const Handshake& handshake);
Handshake HandshakeFromJson(std::string_view line);

std::string RequestToJson(std::span<const TokenId> context);
// Throws ProtocolError on malformed requests or out-of-vocabulary ids.
TokenSequence RequestFromJson(std::string_view line, std::size_t vocab_size);

std::string ProbsToJson(const TokenDistribution& dist);
std::string ErrorToJson(std::string_view kind, std::string_view message,
                        bool fatal);

// Validates a server response and returns the renormalized distribution.
// `drift` receives |sum - 1|. Throws ProtocolError on error records, wrong
// length, negative or non-finite entries, or drift above the tolerance.
TokenDistribution ProbsFromJson(std::string_view line, std::size_t vocab_size,
                                double* drift = nullptr);

// Serves `model` until `in` reaches end of file. Malformed requests get an
// error record and the loop continues; a model failure writes a fatal record
// and returns false.
bool ServeModel(const LanguageModel& model, std::istream& in,
                std::ostream& out);

// Client for a model served by a child process.
class StdioModel final : public LanguageModel {
 public:
  // Starts argv[0] (searched on PATH) with the given arguments and reads its
  // handshake. Ignores SIGPIPE for the calling process.
  static std::unique_ptr<StdioModel> Spawn(
      const std::vector<std::string>& argv);
  ~StdioModel() override;

  StdioModel(const StdioModel&) = delete;
  StdioModel& operator=(const StdioModel&) = delete;

  std::size_t vocab_size() const override { return handshake_.vocab_size; }
  std::string fingerprint() const override { return handshake_.fingerprint; }
  TokenDistribution Next(std::span<const TokenId> context) const override;

  double max_drift() const;
  std::size_t responses() const;

 private:
  StdioModel(int pid, int to_child, int from_child);
  std::string ReadLine() const;

  int pid_;
  int to_child_;
  int from_child_;
  Handshake handshake_;
  mutable std::mutex mu_;
  mutable std::string buffer_;
  mutable double max_drift_ = 0.0;
  mutable std::size_t responses_ = 0;
};

}  // namespace multimark

#endif  // MULTIMARK_STDIO_MODEL_H_
