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

#include "multimark/distribution.h"

#include <cmath>

#include "multimark/error.h"

namespace multimark {

void CompensatedSum::Add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

TokenDistribution::TokenDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("empty probability vector");
  CompensatedSum total;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InputError("probability entries must be finite and non-negative");
    }
    total.Add(p);
  }
  const double sum = total.value();
  if (!(sum > 0.0)) throw InputError("probability vector has zero mass");
  if (sum != 1.0) {
    for (double& p : probs_) p /= sum;
  }
}

TokenDistribution TokenDistribution::Uniform(std::size_t vocab_size) {
  return TokenDistribution(
      std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

TokenDistribution TokenDistribution::PointMass(std::size_t vocab_size,
                                               TokenId token) {
  if (token >= vocab_size) throw InputError("point mass token out of range");
  std::vector<double> probs(vocab_size, 0.0);
  probs[token] = 1.0;
  return TokenDistribution(std::move(probs));
}

double TokenDistribution::Entropy() const {
  double h = 0.0;
  for (double p : probs_) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace multimark
