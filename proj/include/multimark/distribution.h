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

#ifndef MULTIMARK_DISTRIBUTION_H_
#define MULTIMARK_DISTRIBUTION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "multimark/types.h"

namespace multimark {

// Probability vector over the vocabulary, indexed by token id. Entries are
// non-negative and renormalized to sum to one on construction.
class TokenDistribution {
 public:
  // Throws InputError on negative or non-finite entries, or zero total mass.
  explicit TokenDistribution(std::vector<double> probs);

  static TokenDistribution Uniform(std::size_t vocab_size);
  static TokenDistribution PointMass(std::size_t vocab_size, TokenId token);

  std::size_t size() const { return probs_.size(); }
  double operator[](TokenId token) const { return probs_[token]; }
  std::span<const double> probs() const { return probs_; }

  // Shannon entropy in nats.
  double Entropy() const;

 private:
  std::vector<double> probs_;
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace multimark

#endif  // MULTIMARK_DISTRIBUTION_H_
