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

#include "multimark/stdio_model.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "multimark/error.h"

namespace multimark {
namespace {

using nlohmann::json;

json ParseLine(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
}

void WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("write to model failed: ") +
                          std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string HandshakeToJson(const Handshake& handshake) {
  json j;
  j["vocab_size"] = handshake.vocab_size;
  j["fingerprint"] = handshake.fingerprint;
  return j.dump();
}

Handshake HandshakeFromJson(std::string_view line) {
  const json j = ParseLine(line);
  if (!j.is_object() || !j.contains("vocab_size") ||
      !j["vocab_size"].is_number_unsigned() || !j.contains("fingerprint") ||
      !j["fingerprint"].is_string()) {
    throw ProtocolError("handshake must carry vocab_size and fingerprint");
  }
  Handshake h;
  h.vocab_size = j["vocab_size"].get<std::size_t>();
  h.fingerprint = j["fingerprint"].get<std::string>();
  if (h.vocab_size < 2) throw ProtocolError("handshake vocab_size below 2");
  return h;
}

std::string RequestToJson(std::span<const TokenId> context) {
  json j;
  j["ctx"] = std::vector<TokenId>(context.begin(), context.end());
  return j.dump();
}

TokenSequence RequestFromJson(std::string_view line, std::size_t vocab_size) {
  const json j = ParseLine(line);
  if (!j.is_object() || !j.contains("ctx") || !j["ctx"].is_array()) {
    throw ProtocolError("request must be an object with a 'ctx' array");
  }
  TokenSequence ctx;
  ctx.reserve(j["ctx"].size());
  for (const json& v : j["ctx"]) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= vocab_size) {
      throw ProtocolError("context ids must be integers in [0, vocab_size)");
    }
    ctx.push_back(v.get<TokenId>());
  }
  return ctx;
}

std::string ProbsToJson(const TokenDistribution& dist) {
  json j;
  j["probs"] = std::vector<double>(dist.probs().begin(), dist.probs().end());
  return j.dump();
}

std::string ErrorToJson(std::string_view kind, std::string_view message,
                        bool fatal) {
  json j;
  j["error"] = {{"kind", std::string(kind)},
                {"message", std::string(message)},
                {"fatal", fatal}};
  return j.dump();
}

TokenDistribution ProbsFromJson(std::string_view line, std::size_t vocab_size,
                                double* drift) {
  const json j = ParseLine(line);
  if (j.is_object() && j.contains("error")) {
    const json& e = j["error"];
    const std::string message =
        e.is_object() && e.contains("message") && e["message"].is_string()
            ? e["message"].get<std::string>()
            : e.dump();
    throw ProtocolError("model reported an error: " + message);
  }
  if (!j.is_object() || !j.contains("probs") || !j["probs"].is_array()) {
    throw ProtocolError("response must be an object with a 'probs' array");
  }
  const json& arr = j["probs"];
  if (arr.size() != vocab_size) {
    throw ProtocolError("response has " + std::to_string(arr.size()) +
                        " probabilities, expected " +
                        std::to_string(vocab_size));
  }
  std::vector<double> probs;
  probs.reserve(vocab_size);
  double sum = 0.0;
  for (const json& v : arr) {
    if (!v.is_number()) throw ProtocolError("probabilities must be numbers");
    const double p = v.get<double>();
    if (!std::isfinite(p) || p < 0.0) {
      throw ProtocolError("probabilities must be finite and non-negative");
    }
    probs.push_back(p);
    sum += p;
  }
  const double d = std::abs(sum - 1.0);
  if (!(d <= kProtocolSumTolerance)) {
    throw ProtocolError("probabilities sum to " + std::to_string(sum));
  }
  if (drift) *drift = d;
  return TokenDistribution(std::move(probs));
}

bool ServeModel(const LanguageModel& model, std::istream& in,
                std::ostream& out) {
  out << HandshakeToJson({model.vocab_size(), model.fingerprint()}) << '\n'
      << std::flush;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    TokenSequence ctx;
    try {
      ctx = RequestFromJson(line, model.vocab_size());
    } catch (const ProtocolError& e) {
      out << ErrorToJson("protocol", e.what(), false) << '\n' << std::flush;
      continue;
    }
    try {
      out << ProbsToJson(model.Next(ctx)) << '\n' << std::flush;
    } catch (const std::exception& e) {
      out << ErrorToJson("model", e.what(), true) << '\n' << std::flush;
      return false;
    }
  }
  return true;
}

std::unique_ptr<StdioModel> StdioModel::Spawn(
    const std::vector<std::string>& argv) {
  if (argv.empty()) throw ConfigError("model command is empty");
  ::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw ProtocolError("pipe failed");
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProtocolError("pipe failed");
  }
  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw ProtocolError("fork failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  std::unique_ptr<StdioModel> model(
      new StdioModel(pid, to_child[1], from_child[0]));
  model->handshake_ = HandshakeFromJson(model->ReadLine());
  return model;
}

StdioModel::StdioModel(int pid, int to_child, int from_child)
    : pid_(pid), to_child_(to_child), from_child_(from_child) {}

StdioModel::~StdioModel() {
  ::close(to_child_);
  ::close(from_child_);
  int status = 0;
  ::waitpid(pid_, &status, 0);
}

std::string StdioModel::ReadLine() const {
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("read from model failed: ") +
                          std::strerror(errno));
    }
    if (n == 0) throw ProtocolError("model process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

TokenDistribution StdioModel::Next(std::span<const TokenId> context) const {
  std::lock_guard<std::mutex> lock(mu_);
  WriteAll(to_child_, RequestToJson(context) + "\n");
  double drift = 0.0;
  TokenDistribution dist =
      ProbsFromJson(ReadLine(), handshake_.vocab_size, &drift);
  if (drift > max_drift_) max_drift_ = drift;
  ++responses_;
  return dist;
}

double StdioModel::max_drift() const {
  std::lock_guard<std::mutex> lock(mu_);
  return max_drift_;
}

std::size_t StdioModel::responses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return responses_;
}

}  // namespace multimark
