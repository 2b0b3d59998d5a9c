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

#include "multimark/theory.h"

#include <cmath>
#include <limits>
#include <string>

#include "multimark/error.h"
#include "multimark/numerics.h"

namespace multimark {

void TheoryParams::Validate() const {
  if (m < 1 || m > 24) throw ConfigError("bits per chunk m must be in [1, 24]");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("repetition probability must be in [0, 1]");
  }
  if (!(span > 0.0 && span <= 1.0)) {
    throw ConfigError("span must be in (0, 1]");
  }
}

TheoryParams TheoryParams::Uniform(int m, double p) {
  TheoryParams t;
  t.m = m;
  t.p = p;
  t.span = std::ldexp(1.0, -m);
  return t;
}

double RedTokenProbability(const TheoryParams& params) {
  params.Validate();
  return (1.0 - params.p) * params.span / std::ldexp(1.0, params.m + 1) +
         params.p * params.span;
}

double DetectionThreshold(const TheoryParams& params, double eer,
                          std::uint64_t length) {
  const double L = static_cast<double>(length);
  const double g = params.span;
  return NormalQuantile(eer) * std::sqrt(L * g * (1.0 - g)) + L * g;
}

double MissRate(const TheoryParams& params, double eer, std::uint64_t length,
                MissVariance variance) {
  const double L = static_cast<double>(length);
  const double q = RedTokenProbability(params);
  const double var = variance == MissVariance::kBinomial
                         ? L * q * (1.0 - q)
                         : L * q * (1.0 - L * q);
  if (!(var > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double eta = DetectionThreshold(params, eer, length);
  return 1.0 - NormalCdf((eta - L * q) / std::sqrt(var));
}

std::uint64_t LminSolve(const TheoryParams& params, double eer,
                        const LminOptions& options) {
  params.Validate();
  if (!(eer > 0.0 && eer < 0.5)) {
    throw ConfigError("equal error rate must be in (0, 0.5)");
  }
  const std::uint64_t start = options.start == 0 ? 1 : options.start;
  for (std::uint64_t L = start; L <= options.max_length; ++L) {
    const double miss = MissRate(params, eer, L, options.variance);
    if (!std::isnan(miss) && miss <= eer) return L;
  }
  throw UnsatisfiableError("no length up to " +
                           std::to_string(options.max_length) +
                           " reaches equal error rate " + std::to_string(eer));
}

std::vector<EerPoint> EerCurve(const TheoryParams& params,
                               std::span<const double> eer_grid,
                               const LminOptions& options) {
  std::vector<EerPoint> curve;
  curve.reserve(eer_grid.size());
  for (double eer : eer_grid) {
    curve.push_back({eer, LminSolve(params, eer, options)});
  }
  return curve;
}

void WriteEerCsv(std::ostream& out, std::span<const EerPoint> curve) {
  out << "eer,lmin\n";
  for (const EerPoint& point : curve) {
    out << point.eer << ',' << point.lmin << '\n';
  }
}

}  // namespace multimark
