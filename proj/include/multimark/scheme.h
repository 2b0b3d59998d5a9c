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

#ifndef MULTIMARK_SCHEME_H_
#define MULTIMARK_SCHEME_H_

#include <cstddef>

namespace multimark {

// Parameters shared by the encoder, the decoder, and calibration.
struct SchemeParams {
  std::size_t vocab_size = 0;
  int h = 3;  // texture window
  int m = 1;  // bits per chunk
  int H = 1;  // chunks per message
  // Response steps [0, lead_in) carry chunk `step mod H` directly instead of
  // a PRF-allocated position, so timestamp chunks sit in the first tokens.
  int lead_in = 0;
  // Decoder ignores steps whose texture key already occurred in the text.
  bool skip_repeats = true;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

}  // namespace multimark

#endif  // MULTIMARK_SCHEME_H_
