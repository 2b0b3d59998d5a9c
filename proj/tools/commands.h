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

#ifndef MULTIMARK_TOOLS_COMMANDS_H_
#define MULTIMARK_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "config.h"
#include "multimark/attacks.h"
#include "multimark/theory.h"

namespace multimark::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Aggregate of one cmd_detect run.
struct DetectSummary {
  std::size_t texts = 0;
  std::size_t detected = 0;
  double detection_rate = 0.0;
  double mean_z = 0.0;
  std::size_t with_payload = 0;
  double mean_bit_accuracy = 0.0;  // over texts that carry a payload
};

int CmdKeygen(const std::string& output, std::size_t count,
              const std::string& label, std::size_t bytes, std::ostream& out);
int CmdEmbed(const RunConfig& config, std::ostream& out);
int CmdGenerate(const RunConfig& config, std::ostream& out);
int CmdCalibrate(const RunConfig& config, std::ostream& out);
int CmdDetect(const RunConfig& config, std::ostream& out);
DetectSummary DetectCorpus(const RunConfig& config,
                           std::ostream* records_out);

struct TheoryArgs {
  TheoryParams params;
  std::vector<double> eer_grid;
  LminOptions options;
};
int CmdTheory(const TheoryArgs& args, const std::string& output,
              std::ostream& out);

struct AttackArgs {
  AttackKind kind = AttackKind::kCopyPaste;
  double epsilon = 0.0;
  std::string donor;  // donor corpus for copy_paste
  CopyPasteMode mode = CopyPasteMode::kScattered;
};
int CmdAttack(const RunConfig& config, const AttackArgs& args,
              std::ostream& out);
int CmdServe(const RunConfig& config, std::istream& in, std::ostream& out);

// Parses argv and runs one subcommand. Failures are reported as a single
// JSON error record on `err` and a nonzero return value.
int RunCli(int argc, const char* const* argv, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace multimark::cli

#endif  // MULTIMARK_TOOLS_COMMANDS_H_
