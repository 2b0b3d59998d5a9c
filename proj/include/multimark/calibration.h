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

#ifndef MULTIMARK_CALIBRATION_H_
#define MULTIMARK_CALIBRATION_H_

#include <cstddef>
#include <span>
#include <string>

#include "multimark/key.h"
#include "multimark/scheme.h"
#include "multimark/types.h"

namespace multimark {

// floor(log2(length)); texts in the same bucket share a calibration.
int LengthBucket(std::size_t length);

struct CalibrationFingerprint {
  std::size_t vocab_size = 0;
  int h = 0;
  int m = 0;
  int H = 0;
  int lead_in = 0;
  bool skip_repeats = true;
  int length_bucket = 0;

  static CalibrationFingerprint For(const SchemeParams& params,
                                    std::size_t text_length);
  std::string ToString() const;

  friend bool operator==(const CalibrationFingerprint&,
                         const CalibrationFingerprint&) = default;
};

// Null-hypothesis mean and standard deviation of the detection statistic R.
struct NullCalibration {
  static constexpr std::size_t kMinSamples = 100;

  double mu_R = 0.0;
  double sigma_R = 0.0;
  std::size_t n_samples = 0;
  CalibrationFingerprint fingerprint;

  // Throws CalibrationError when this calibration cannot score `text_length`
  // tokens decoded under `params`; also rejects empty calibrations.
  void CheckCompatible(const SchemeParams& params,
                       std::size_t text_length) const;
};

// Runs the counting pass on every (non-watermarked) text and records R.
// Throws CalibrationError with fewer than kMinSamples texts or zero spread.
NullCalibration CalibrateNull(std::span<const TokenSequence> texts,
                              const WatermarkKey& key,
                              const SchemeParams& params);

}  // namespace multimark

#endif  // MULTIMARK_CALIBRATION_H_
