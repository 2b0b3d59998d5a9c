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

#include "multimark/calibration.h"

#include <algorithm>
#include <bit>
#include <vector>

#include "multimark/codec.h"
#include "multimark/error.h"
#include "multimark/numerics.h"

namespace multimark {

int LengthBucket(std::size_t length) {
  if (length == 0) return -1;
  return static_cast<int>(std::bit_width(length)) - 1;
}

CalibrationFingerprint CalibrationFingerprint::For(const SchemeParams& params,
                                                   std::size_t text_length) {
  CalibrationFingerprint f;
  f.vocab_size = params.vocab_size;
  f.h = params.h;
  f.m = params.m;
  f.H = params.H;
  f.lead_in = params.lead_in;
  f.skip_repeats = params.skip_repeats;
  f.length_bucket = LengthBucket(text_length);
  return f;
}

std::string CalibrationFingerprint::ToString() const {
  return "vocab=" + std::to_string(vocab_size) + " h=" + std::to_string(h) +
         " m=" + std::to_string(m) + " H=" + std::to_string(H) +
         " lead_in=" + std::to_string(lead_in) +
         " skip_repeats=" + (skip_repeats ? "1" : "0") +
         " length_bucket=" + std::to_string(length_bucket);
}

void NullCalibration::CheckCompatible(const SchemeParams& params,
                                      std::size_t text_length) const {
  if (n_samples == 0) throw CalibrationError("missing null calibration");
  if (!(sigma_R > 0.0)) {
    throw CalibrationError("calibration has non-positive sigma_R");
  }
  const CalibrationFingerprint want =
      CalibrationFingerprint::For(params, text_length);
  if (!(want == fingerprint)) {
    throw CalibrationError("calibration fingerprint mismatch: calibrated for {" +
                           fingerprint.ToString() + "}, text needs {" +
                           want.ToString() + "}");
  }
}

NullCalibration CalibrateNull(std::span<const TokenSequence> texts,
                              const WatermarkKey& key,
                              const SchemeParams& params) {
  if (texts.size() < NullCalibration::kMinSamples) {
    throw CalibrationError("calibration needs at least " +
                           std::to_string(NullCalibration::kMinSamples) +
                           " texts, got " + std::to_string(texts.size()));
  }
  std::vector<double> totals;
  std::vector<std::size_t> lengths;
  totals.reserve(texts.size());
  for (const TokenSequence& text : texts) {
    const RedCountTable table = CountRedHits(text, key, params);
    totals.push_back(static_cast<double>(ExtractMessage(table).red_total));
    lengths.push_back(text.size());
  }
  std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2,
                   lengths.end());
  const std::size_t median_length = lengths[lengths.size() / 2];

  const MeanStd stats = SampleMeanStd(totals);
  if (!(stats.stddev > 0.0)) {
    throw CalibrationError(
        "null statistic has zero spread; the calibration corpus must contain "
        "diverse texts");
  }
  NullCalibration c;
  c.mu_R = stats.mean;
  c.sigma_R = stats.stddev;
  c.n_samples = texts.size();
  c.fingerprint = CalibrationFingerprint::For(params, median_length);
  return c;
}

}  // namespace multimark
