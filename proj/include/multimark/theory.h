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

// Capacity model for the detector.
//
// With repetition probability p and red-list span beta - alpha, the chance
// that a token lands in the red list of the embedded chunk is
//
//   q = (1 - p) (beta - alpha) / 2^(m+1) + p (beta - alpha).
//
// A text of L tokens is flagged when its red count falls below
//   eta = Phi^-1(eer) sqrt(L g (1 - g)) + L g,   g = beta - alpha,
// and is missed with probability about 1 - Phi((eta - L q) / s), where s is
// the standard deviation of Bin(L, q). The minimum length is the first L,
// counting up from a starting estimate, whose miss rate is at most eer.

#ifndef MULTIMARK_THEORY_H_
#define MULTIMARK_THEORY_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace multimark {

struct TheoryParams {
  int m = 1;
  double p = 0.0;     // repetition probability
  double span = 0.5;  // beta - alpha

  // Throws ConfigError out of range.
  void Validate() const;

  // Uniform model: the span of each red list is exactly 2^-m.
  static TheoryParams Uniform(int m, double p = 0.0);
};

double RedTokenProbability(const TheoryParams& params);

enum class MissVariance {
  kBinomial,  // s^2 = L q (1 - q)
  kPrinted,   // s^2 = L q (1 - L q); lengths with s^2 <= 0 never qualify
};

struct LminOptions {
  std::uint64_t start = 30;
  std::uint64_t max_length = 10'000'000;
  MissVariance variance = MissVariance::kBinomial;
};

// Detection threshold on the red count for length L.
double DetectionThreshold(const TheoryParams& params, double eer,
                          std::uint64_t length);

// Normal approximation of the miss rate at length L. NaN when the variance
// form is degenerate at this length.
double MissRate(const TheoryParams& params, double eer, std::uint64_t length,
                MissVariance variance = MissVariance::kBinomial);

// Throws ConfigError unless 0 < eer < 0.5, and UnsatisfiableError when no
// length up to options.max_length qualifies.
std::uint64_t LminSolve(const TheoryParams& params, double eer,
                        const LminOptions& options = {});

struct EerPoint {
  double eer = 0.0;
  std::uint64_t lmin = 0;
};

std::vector<EerPoint> EerCurve(const TheoryParams& params,
                               std::span<const double> eer_grid,
                               const LminOptions& options = {});

// "eer,lmin" header followed by one row per point.
void WriteEerCsv(std::ostream& out, std::span<const EerPoint> curve);

}  // namespace multimark

#endif  // MULTIMARK_THEORY_H_
