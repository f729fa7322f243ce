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

#include "cluemark/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cluemark/error.hpp"

namespace cluemark {

namespace {
constexpr int kSeriesTerms = 20;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) {
    return 1.0;
  }
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form; converges fast for small lambda.
    const double factor = std::sqrt(2.0 * pi) / lambda;
    const double base = -pi * pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
      const double odd = 2.0 * j - 1.0;
      sum += std::exp(odd * odd * base);
    }
    return std::clamp(1.0 - factor * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= kSeriesTerms; ++j) {
    sum += sign * std::exp(-2.0 * j * j * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples,
                 const std::function<double(double)>& cdf) {
  if (samples.size() < 8) {
    throw InvalidInput("ks_test: need at least 8 samples, got " +
                       std::to_string(samples.size()));
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!std::isfinite(x)) {
      throw InvalidInput("ks_test: non-finite sample");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / m;
    const double above = static_cast<double>(i + 1) / m;
    d = std::max({d, above - f, f - below});
  }
  const double root_m = std::sqrt(m);
  const double lambda = (root_m + 0.12 + 0.11 / root_m) * d;
  return {d, kolmogorov_survival(lambda)};
}

double normal_cdf(double x, double stddev) {
  return 0.5 * std::erfc(-x / (stddev * std::numbers::sqrt2));
}

RoseHistogram rose_histogram(std::span<const double> z, std::size_t bins) {
  if (bins < 4) {
    throw InvalidParameter("rose_histogram: need at least 4 bins");
  }
  RoseHistogram hist;
  hist.bin_count = bins;
  hist.counts.assign(bins, 0);
  for (double value : z) {
    if (!(value >= 0.0 && value < 1.0)) {
      throw InvalidInput("rose_histogram: z-score outside [0, 1): " +
                         std::to_string(value));
    }
    auto bin = static_cast<std::size_t>(value * static_cast<double>(bins));
    bin = std::min(bin, bins - 1);
    ++hist.counts[bin];
    ++hist.total;
  }
  return hist;
}

}  // namespace cluemark
