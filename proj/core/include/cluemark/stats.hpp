// Copyright 2026 The cluemark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUEMARK_STATS_HPP
#define CLUEMARK_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cluemark {

struct KsResult {
  double statistic = 0.0;  // D = sup |F_emp - F|
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`.
///
/// The p-value is asymptotic, evaluated at the Stephens-corrected
/// lambda = (sqrt(m) + 0.12 + 0.11 / sqrt(m)) * D. Requires at least 8
/// samples.
KsResult ks_test(std::span<const double> samples,
                 const std::function<double(double)>& cdf);

/// CDF of N(0, stddev^2).
double normal_cdf(double x, double stddev = 1.0);

/// Counts of z-scores in `bin_count` equal sectors of [0, 1).
struct RoseHistogram {
  std::size_t bin_count = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double bin_lower(std::size_t bin) const {
    return static_cast<double>(bin) / static_cast<double>(bin_count);
  }
  double bin_upper(std::size_t bin) const { return bin_lower(bin + 1); }
};

/// Throws InvalidParameter for bins < 4 and InvalidInput for z outside [0, 1).
RoseHistogram rose_histogram(std::span<const double> z, std::size_t bins);

}  // namespace cluemark

#endif  // CLUEMARK_STATS_HPP
