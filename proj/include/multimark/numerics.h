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

#ifndef MULTIMARK_NUMERICS_H_
#define MULTIMARK_NUMERICS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace multimark {

double NormalCdf(double x);

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley step against erfc. Requires 0 < p < 1.
double NormalQuantile(double p);

// Upper tail of the chi-square distribution.
double ChiSquareSurvival(double statistic, double dof);

double BinomialPmf(std::uint64_t k, std::uint64_t n, double p);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed counts against expected counts. Adjacent
// cells are pooled from the right until each pooled cell expects at least
// `min_expected`.
ChiSquareResult ChiSquareGoodnessOfFit(std::span<const double> observed,
                                       std::span<const double> expected,
                                       double min_expected = 5.0);

// Homogeneity test on a 2 x k contingency table. Columns empty in both rows
// are dropped.
ChiSquareResult ChiSquareTwoSample(std::span<const double> a,
                                   std::span<const double> b);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // unbiased (n - 1) estimator
};

MeanStd SampleMeanStd(std::span<const double> values);

}  // namespace multimark

#endif  // MULTIMARK_NUMERICS_H_
