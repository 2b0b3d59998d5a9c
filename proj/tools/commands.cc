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

#include "commands.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "multimark/calibration.h"
#include "multimark/codec.h"
#include "multimark/corpus.h"
#include "multimark/error.h"
#include "multimark/parallel.h"
#include "multimark/stdio_model.h"

namespace multimark::cli {
namespace {

using nlohmann::ordered_json;

// Runs `fn` against the file at `path`, or against `fallback` when the path
// is empty or "-".
void WithOutput(const std::string& path, std::ostream& fallback,
                const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    fallback.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  fn(file);
  file.flush();
  if (!file) throw InputError("failed writing '" + path + "'");
}

std::vector<CorpusRecord> LoadInput(const RunConfig& config) {
  if (config.input.empty()) throw ConfigError("no input corpus given");
  std::vector<CorpusRecord> records = ReadCorpusFile(config.input);
  if (records.empty()) throw InputError("input corpus is empty");
  return records;
}

SchemeParams SchemeForCorpus(const RunConfig& config,
                             const std::vector<CorpusRecord>& records) {
  const SchemeParams params = config.Scheme(records.front().vocab_size);
  for (const CorpusRecord& r : records) r.CheckMatches(params, config.m_key);
  return params;
}

std::string ModelLogTag(const LanguageModel& model) {
  if (const auto* stdio = dynamic_cast<const StdioModel*>(&model)) {
    std::ostringstream s;
    s << "model responses=" << stdio->responses()
      << " max_sum_drift=" << stdio->max_drift();
    return s.str();
  }
  return {};
}

std::vector<CorpusRecord> EmbedRecords(const RunConfig& config,
                                       const LanguageModel& model) {
  const std::size_t V = model.vocab_size();
  const SchemeParams params = config.Scheme(V);
  const std::vector<WatermarkKey> keys = LoadKeys(config);
  if (config.key_index >= keys.size()) {
    throw ConfigError("key_index " + std::to_string(config.key_index) +
                      " is outside the key set");
  }
  if (config.length < 1) throw ConfigError("length must be >= 1");
  std::vector<CorpusRecord> records(config.texts);
  ParallelFor(config.texts, ResolveWorkers(config.workers), [&](std::size_t i) {
    MessagePayload payload = PackPayload(config.MetadataFor(i), params.m,
                                         params.H);
    payload.key_bit_count = config.m_key;
    payload.key_bits = config.key_index;
    EncodeOptions options;
    options.params = params;
    options.length = config.length;
    options.rng_seed = config.seed + "/" + std::to_string(i);
    const TokenSequence prompt = config.PromptFor(i, V);
    const GenerationRecord g =
        EncodeKeyIter(model, prompt, keys, payload, options);
    records[i] = CorpusRecord::FromGeneration(g, params);
  });
  return records;
}

ordered_json DetectionToJson(std::size_t index, const DetectionResult& r,
                             const std::optional<double>& accuracy) {
  ordered_json j;
  j["index"] = index;
  j["decision"] = r.decision;
  j["z"] = r.z;
  j["p_value"] = r.p_value;
  j["red_total"] = r.red_total;
  j["counted_steps"] = r.counted_steps;
  j["counting_passes"] = r.counting_passes;
  j["extracted_bits"] = r.extracted.ToBits();
  j["key_index"] = r.extracted.key_bits;
  if (accuracy) j["bit_accuracy"] = *accuracy;
  return j;
}

struct DetectedText {
  DetectionResult result;
  std::optional<double> accuracy;
};

std::vector<DetectedText> DetectRecords(const RunConfig& config,
                                        const std::vector<CorpusRecord>& recs) {
  if (config.calibration.empty()) {
    throw CalibrationError("missing null calibration; pass --calibration");
  }
  const NullCalibration calibration = LoadCalibration(config.calibration);
  const SchemeParams params = SchemeForCorpus(config, recs);
  const std::vector<WatermarkKey> keys = LoadKeys(config);
  std::vector<DetectedText> out(recs.size());
  ParallelFor(recs.size(), ResolveWorkers(config.workers), [&](std::size_t i) {
    out[i].result = DecodeKeyIter(recs[i].tokens, keys, params, calibration,
                                  config.z_threshold);
    if (const auto truth = recs[i].Payload()) {
      out[i].accuracy = BitAccuracy(*truth, out[i].result.extracted);
    }
  });
  return out;
}

DetectSummary Summarize(const std::vector<DetectedText>& results) {
  DetectSummary s;
  s.texts = results.size();
  double z_sum = 0.0;
  double acc_sum = 0.0;
  for (const DetectedText& d : results) {
    s.detected += d.result.decision;
    z_sum += d.result.z;
    if (d.accuracy) {
      ++s.with_payload;
      acc_sum += *d.accuracy;
    }
  }
  if (s.texts > 0) {
    s.detection_rate = static_cast<double>(s.detected) / s.texts;
    s.mean_z = z_sum / s.texts;
  }
  if (s.with_payload > 0) s.mean_bit_accuracy = acc_sum / s.with_payload;
  return s;
}

ordered_json SummaryToJson(const DetectSummary& s) {
  ordered_json j;
  j["texts"] = s.texts;
  j["detected"] = s.detected;
  j["detection_rate"] = s.detection_rate;
  j["mean_z"] = s.mean_z;
  if (s.with_payload > 0) j["mean_bit_accuracy"] = s.mean_bit_accuracy;
  return j;
}

void PrintSummaryTable(std::ostream& out, const std::string& label,
                       const DetectSummary& s) {
  out << std::left << std::setw(10) << label << std::right << std::fixed
      << std::setprecision(4) << " texts=" << s.texts
      << " detection_rate=" << s.detection_rate << " mean_z=" << s.mean_z;
  if (s.with_payload > 0) out << " bit_accuracy=" << s.mean_bit_accuracy;
  out << '\n';
  out.unsetf(std::ios::floatfield);
}

bool IsStdout(const std::string& path) { return path.empty() || path == "-"; }

}  // namespace

int CmdKeygen(const std::string& output, std::size_t count,
              const std::string& label, std::size_t bytes, std::ostream& out) {
  if (count == 0) throw ConfigError("key count must be >= 1");
  WithOutput(output, out, [&](std::ostream& o) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string name =
          count == 1 ? label : label + "/" + std::to_string(i);
      const WatermarkKey key = label.empty()
                                   ? WatermarkKey::Random(bytes)
                                   : WatermarkKey::FromLabel(name, bytes);
      o << key.ToHex() << '\n';
    }
  });
  return kExitOk;
}

int CmdEmbed(const RunConfig& config, std::ostream& out) {
  const std::unique_ptr<LanguageModel> model = MakeModel(config.model);
  const std::vector<CorpusRecord> records = EmbedRecords(config, *model);
  WithOutput(config.output, out,
             [&](std::ostream& o) { WriteCorpus(o, records); });
  if (const std::string tag = ModelLogTag(*model); !tag.empty()) {
    std::clog << tag << '\n';
  }
  return kExitOk;
}

int CmdGenerate(const RunConfig& config, std::ostream& out) {
  const std::unique_ptr<LanguageModel> model = MakeModel(config.model);
  const std::size_t V = model->vocab_size();
  const SchemeParams params = config.Scheme(V);
  std::vector<CorpusRecord> records(config.texts);
  ParallelFor(config.texts, ResolveWorkers(config.workers), [&](std::size_t i) {
    const TokenSequence prompt = config.PromptFor(i, V);
    records[i] = CorpusRecord::Plain(
        GeneratePlain(*model, prompt, config.length,
                      config.seed + "/plain/" + std::to_string(i)),
        params, config.m_key);
  });
  WithOutput(config.output, out,
             [&](std::ostream& o) { WriteCorpus(o, records); });
  return kExitOk;
}

int CmdCalibrate(const RunConfig& config, std::ostream& out) {
  const std::vector<CorpusRecord> records = LoadInput(config);
  const SchemeParams params = SchemeForCorpus(config, records);
  const std::vector<WatermarkKey> keys = LoadKeys(config);
  std::vector<TokenSequence> texts;
  texts.reserve(records.size());
  for (const CorpusRecord& r : records) texts.push_back(r.tokens);
  const NullCalibration c = CalibrateNull(texts, keys.front(), params);
  const std::string dest =
      !IsStdout(config.output) ? config.output : config.calibration;
  WithOutput(dest, out,
             [&](std::ostream& o) { o << CalibrationToJson(c) << '\n'; });
  return kExitOk;
}

DetectSummary DetectCorpus(const RunConfig& config,
                           std::ostream* records_out) {
  const std::vector<CorpusRecord> records = LoadInput(config);
  const std::vector<DetectedText> results = DetectRecords(config, records);
  if (records_out) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      *records_out << DetectionToJson(i, results[i].result, results[i].accuracy)
                          .dump()
                   << '\n';
    }
  }
  if (!config.csv.empty()) {
    WithOutput(config.csv, std::cout, [&](std::ostream& o) {
      o << "index,decision,z,red_total,bit_accuracy\n";
      for (std::size_t i = 0; i < results.size(); ++i) {
        const DetectedText& d = results[i];
        o << i << ',' << (d.result.decision ? 1 : 0) << ',' << d.result.z
          << ',' << d.result.red_total << ',';
        if (d.accuracy) o << *d.accuracy;
        o << '\n';
      }
    });
  }
  return Summarize(results);
}

int CmdDetect(const RunConfig& config, std::ostream& out) {
  DetectSummary summary;
  WithOutput(config.output, out, [&](std::ostream& o) {
    summary = DetectCorpus(config, &o);
  });
  if (!config.summary.empty()) {
    WithOutput(config.summary, out, [&](std::ostream& o) {
      o << SummaryToJson(summary).dump(2) << '\n';
    });
  }
  std::ostream& table = IsStdout(config.output) ? std::clog : out;
  PrintSummaryTable(table, "detect", summary);
  return kExitOk;
}

int CmdTheory(const TheoryArgs& args, const std::string& output,
              std::ostream& out) {
  if (args.eer_grid.empty()) throw ConfigError("eer grid is empty");
  const std::vector<EerPoint> curve =
      EerCurve(args.params, args.eer_grid, args.options);
  WithOutput(output, out, [&](std::ostream& o) { WriteEerCsv(o, curve); });
  return kExitOk;
}

int CmdAttack(const RunConfig& config, const AttackArgs& args,
              std::ostream& out) {
  const std::vector<CorpusRecord> clean = LoadInput(config);
  std::vector<CorpusRecord> donors;
  if (args.kind == AttackKind::kCopyPaste) {
    if (args.donor.empty()) throw ConfigError("copy_paste needs --donor");
    donors = ReadCorpusFile(args.donor);
    if (donors.empty()) throw InputError("donor corpus is empty");
  }
  std::vector<CorpusRecord> attacked(clean.size());
  ParallelFor(clean.size(), ResolveWorkers(config.workers), [&](std::size_t i) {
    const std::string seed = config.seed + "/attack/" + std::to_string(i);
    CorpusRecord r = clean[i];
    if (args.kind == AttackKind::kCopyPaste) {
      r.tokens = CopyPaste(clean[i].tokens, donors[i % donors.size()].tokens,
                           args.epsilon, seed, args.mode);
    } else {
      r.tokens = RandomEdits(clean[i].tokens, args.kind, args.epsilon,
                             clean[i].vocab_size, seed);
    }
    r.flags.reset();  // step flags no longer line up with the tokens
    attacked[i] = std::move(r);
  });
  WithOutput(config.output, out,
             [&](std::ostream& o) { WriteCorpus(o, attacked); });

  if (!config.calibration.empty()) {
    const DetectSummary before = Summarize(DetectRecords(config, clean));
    const DetectSummary after = Summarize(DetectRecords(config, attacked));
    std::ostream& table = IsStdout(config.output) ? std::clog : out;
    table << "attack=" << AttackKindName(args.kind)
          << " epsilon=" << args.epsilon << '\n';
    PrintSummaryTable(table, "clean", before);
    PrintSummaryTable(table, "attacked", after);
    if (!config.summary.empty()) {
      WithOutput(config.summary, out, [&](std::ostream& o) {
        ordered_json j;
        j["attack"] = AttackKindName(args.kind);
        j["epsilon"] = args.epsilon;
        j["clean"] = SummaryToJson(before);
        j["attacked"] = SummaryToJson(after);
        o << j.dump(2) << '\n';
      });
    }
  }
  return kExitOk;
}

int CmdServe(const RunConfig& config, std::istream& in, std::ostream& out) {
  if (config.model.kind != ModelSelector::Kind::kSynthetic) {
    throw ConfigError("serve only serves synthetic models");
  }
  const SyntheticModel model(config.model.synthetic);
  return ServeModel(model, in, out) ? kExitOk : kExitFailure;
}

namespace {

// Flags that mirror RunConfig fields. Each flag overrides the config file
// only when given on the command line.
class RunFlags {
 public:
  void Register(CLI::App* app) {
    app->add_option("--config", config_path_, "RunConfig JSON file");
    Bind(app, "--key", &RunConfig::key_path, "watermark key file");
    Bind(app, "--key-set", &RunConfig::key_set_path, "key set file");
    Bind(app, "--window", &RunConfig::h, "texture window h");
    Bind(app, "--m", &RunConfig::m, "bits per chunk");
    Bind(app, "--H", &RunConfig::H, "chunks per message");
    Bind(app, "--m-key", &RunConfig::m_key, "key iteration bits");
    Bind(app, "--lead-in", &RunConfig::lead_in,
         "leading steps with sequential chunk positions");
    Bind(app, "--length", &RunConfig::length, "tokens per text");
    Bind(app, "--texts", &RunConfig::texts, "texts to produce");
    Bind(app, "--z-threshold", &RunConfig::z_threshold, "decision threshold");
    Bind(app, "--seed", &RunConfig::seed, "run seed");
    Bind(app, "--key-index", &RunConfig::key_index, "key iteration value");
    Bind(app, "--user-id", &RunConfig::user_id, "user id");
    Bind(app, "--user-bits", &RunConfig::user_bits, "user id width");
    Bind(app, "--model-id", &RunConfig::model_id, "model id");
    Bind(app, "--model-bits", &RunConfig::model_bits, "model id width");
    Bind(app, "--timestamp-bits", &RunConfig::timestamp_bits,
         "timestamp width");
    Bind(app, "--input", &RunConfig::input, "input corpus");
    Bind(app, "--output", &RunConfig::output, "output file ('-' = stdout)");
    Bind(app, "--calibration", &RunConfig::calibration, "calibration file");
    Bind(app, "--csv", &RunConfig::csv, "per-text CSV output");
    Bind(app, "--summary", &RunConfig::summary, "summary JSON output");
    Bind(app, "--workers", &RunConfig::workers, "worker threads (0 = all)");
    Bind(app, "--prompt", &RunConfig::prompt, "fixed prompt token ids");
    auto* ts = app->add_option("--timestamp", timestamp_, "pinned timestamp");
    appliers_.push_back([this, ts](RunConfig& c) {
      if (ts->count()) c.timestamp = timestamp_;
    });
    auto* no_skip = app->add_flag("--count-repeats", count_repeats_,
                                  "decoder also counts repeated texture keys");
    appliers_.push_back([this, no_skip](RunConfig& c) {
      if (no_skip->count()) c.skip_repeats = !count_repeats_;
    });
    BindModel(app, "--vocab", &SyntheticModelSpec::vocab_size,
              "synthetic vocabulary size");
    BindModel(app, "--temperature", &SyntheticModelSpec::temperature,
              "synthetic temperature");
    BindModel(app, "--context-classes", &SyntheticModelSpec::context_classes,
              "synthetic context classes (0 = unlimited)");
    BindModel(app, "--model-seed", &SyntheticModelSpec::seed,
              "synthetic model seed");
    BindModel(app, "--model-window", &SyntheticModelSpec::window,
              "synthetic context window");
    auto* cmd = app->add_option("--model-cmd", model_cmd_,
                                "protocol server command line");
    appliers_.push_back([this, cmd](RunConfig& c) {
      if (cmd->count()) {
        c.model.kind = ModelSelector::Kind::kCommand;
        c.model.command = model_cmd_;
      }
    });
  }

  // Config file, then the key environment variable, then explicit flags.
  RunConfig Resolve() const {
    RunConfig c = config_path_.empty() ? RunConfig{} : LoadRunConfig(config_path_);
    if (const char* env = std::getenv(kKeyEnvVar); env && *env) {
      c.key_path = env;
    }
    for (const auto& apply : appliers_) apply(c);
    return c;
  }

 private:
  template <typename T>
  void Bind(CLI::App* app, const std::string& name, T RunConfig::*member,
            const std::string& help) {
    auto storage = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *storage, help);
    appliers_.push_back([storage, opt, member](RunConfig& c) {
      if (opt->count()) c.*member = *storage;
    });
  }

  template <typename T>
  void BindModel(CLI::App* app, const std::string& name,
                 T SyntheticModelSpec::*member, const std::string& help) {
    auto storage = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *storage, help);
    appliers_.push_back([storage, opt, member](RunConfig& c) {
      if (opt->count()) {
        c.model.kind = ModelSelector::Kind::kSynthetic;
        c.model.synthetic.*member = *storage;
      }
    });
  }

  std::string config_path_;
  std::uint64_t timestamp_ = 0;
  bool count_repeats_ = false;
  std::vector<std::string> model_cmd_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

int ExitCodeFor(const Error& e) {
  return e.kind() == "config" ? kExitUsage : kExitFailure;
}

void WriteErrorRecord(std::ostream& err, const std::string& kind,
                      const std::string& message) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  err << j.dump() << '\n';
  err.flush();
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-bit watermarking for language model output"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "multimark 1.0.0");

  std::string keygen_out;
  std::size_t keygen_count = 1;
  std::string keygen_label;
  std::size_t keygen_bytes = WatermarkKey::kMinBytes;
  CLI::App* keygen = app.add_subcommand("keygen", "write watermark keys");
  keygen->add_option("--output", keygen_out, "key file ('-' = stdout)");
  keygen->add_option("--count", keygen_count, "keys to write (key set)");
  keygen->add_option("--label", keygen_label,
                     "derive keys deterministically from a label");
  keygen->add_option("--bytes", keygen_bytes, "key length in bytes");

  RunFlags embed_flags, generate_flags, calibrate_flags, detect_flags,
      attack_flags, serve_flags;
  CLI::App* embed = app.add_subcommand("embed", "generate watermarked corpus");
  embed_flags.Register(embed);
  CLI::App* generate =
      app.add_subcommand("generate", "generate non-watermarked corpus");
  generate_flags.Register(generate);
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "estimate the null statistic");
  calibrate_flags.Register(calibrate);
  CLI::App* detect = app.add_subcommand("detect", "detect and extract");
  detect_flags.Register(detect);

  CLI::App* attack = app.add_subcommand("attack", "apply an editing attack");
  attack_flags.Register(attack);
  std::string attack_kind = "copy_paste";
  std::string attack_mode = "scattered";
  AttackArgs attack_args;
  attack->add_option("--kind", attack_kind,
                     "copy_paste, substitute, insert or delete");
  attack->add_option("--epsilon", attack_args.epsilon, "edit proportion");
  attack->add_option("--donor", attack_args.donor,
                     "non-watermarked donor corpus");
  attack->add_option("--mode", attack_mode, "scattered or contiguous");

  CLI::App* theory = app.add_subcommand("theory", "minimum length curve");
  int theory_m = 1;
  double theory_p = 0.0;
  double theory_span = 0.0;
  std::vector<double> theory_eer{0.01};
  std::uint64_t theory_start = LminOptions{}.start;
  std::string theory_variance = "binomial";
  std::string theory_out;
  theory->add_option("--m", theory_m, "bits per chunk");
  theory->add_option("--p", theory_p, "repetition probability");
  theory->add_option("--span", theory_span,
                     "red-list span (default 2^-m, uniform model)");
  theory->add_option("--eer", theory_eer, "equal error rates")->delimiter(',');
  theory->add_option("--start", theory_start, "first length tried");
  theory->add_option("--variance", theory_variance, "binomial or printed");
  theory->add_option("--output", theory_out, "CSV file ('-' = stdout)");

  CLI::App* serve =
      app.add_subcommand("serve", "serve a synthetic model over stdio");
  serve_flags.Register(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    WriteErrorRecord(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (keygen->parsed()) {
      return CmdKeygen(keygen_out, keygen_count, keygen_label, keygen_bytes,
                       out);
    }
    if (embed->parsed()) return CmdEmbed(embed_flags.Resolve(), out);
    if (generate->parsed()) return CmdGenerate(generate_flags.Resolve(), out);
    if (calibrate->parsed()) {
      return CmdCalibrate(calibrate_flags.Resolve(), out);
    }
    if (detect->parsed()) return CmdDetect(detect_flags.Resolve(), out);
    if (attack->parsed()) {
      attack_args.kind = ParseAttackKind(attack_kind);
      if (attack_mode == "scattered") {
        attack_args.mode = CopyPasteMode::kScattered;
      } else if (attack_mode == "contiguous") {
        attack_args.mode = CopyPasteMode::kContiguous;
      } else {
        throw ConfigError("unknown copy-paste mode '" + attack_mode + "'");
      }
      return CmdAttack(attack_flags.Resolve(), attack_args, out);
    }
    if (theory->parsed()) {
      TheoryArgs args;
      args.params = TheoryParams::Uniform(theory_m, theory_p);
      if (theory_span > 0.0) args.params.span = theory_span;
      args.eer_grid = theory_eer;
      args.options.start = theory_start;
      if (theory_variance == "binomial") {
        args.options.variance = MissVariance::kBinomial;
      } else if (theory_variance == "printed") {
        args.options.variance = MissVariance::kPrinted;
      } else {
        throw ConfigError("unknown variance form '" + theory_variance + "'");
      }
      return CmdTheory(args, theory_out, out);
    }
    if (serve->parsed()) return CmdServe(serve_flags.Resolve(), in, out);
  } catch (const Error& e) {
    WriteErrorRecord(err, e.kind(), e.what());
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    WriteErrorRecord(err, "internal", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace multimark::cli
