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

#include "cluemark/clwe.hpp"

#include <algorithm>
#include <cfenv>
#include <numbers>
#include <numeric>
#include <string>

#include "cluemark/error.hpp"

namespace cluemark {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtTwoPi = std::sqrt(2.0 * kPi);

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(what) + ": non-finite input component");
    }
  }
}

void require_units(const SampleMatrix& samples, UnitConvention expected,
                   const char* what) {
  if (samples.units() != expected) {
    throw InvalidInput(std::string(what) + ": expected samples in " +
                       to_string(expected) + " units, got " +
                       to_string(samples.units()));
  }
}

void require_dims(const SampleMatrix& samples, const SecretDirection& w,
                  const char* what) {
  if (samples.cols() != w.size()) {
    throw DimensionMismatch(std::string(what) + ": samples have " +
                            std::to_string(samples.cols()) +
                            " columns but the direction has dimension " +
                            std::to_string(w.size()));
  }
}

// Discrete Gaussian on the integers with weights rho_{gamma'}(k), with
// cumulative tables from both ends so that tail lookups keep full relative
// precision.
class PancakeLadder {
 public:
  explicit PancakeLadder(double gamma_prime) {
    // exp(-45) ~ 3e-20 of relative weight is dropped at each end.
    const auto half =
        static_cast<int>(std::ceil(gamma_prime * std::sqrt(45.0 / kPi))) + 1;
    k_min_ = -half;
    const std::size_t count = 2 * static_cast<std::size_t>(half) + 1;
    std::vector<double> weight(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double k = static_cast<double>(k_min_ + static_cast<int>(i));
      weight[i] = std::exp(-kPi * k * k / (gamma_prime * gamma_prime));
    }
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    lower_.resize(count);
    upper_.resize(count);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      acc += weight[i] / total;
      lower_[i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = count; i-- > 0;) {
      acc += weight[i] / total;
      upper_[i] = acc;
    }
  }

  // Index whose discrete-Gaussian quantile range contains the Gaussian
  // quantile of `t` (t measured in rho units, variance 1 / (2 pi)).
  int select(double t) const {
    if (t <= 0.0) {
      const double lower_tail = 0.5 * std::erfc(-t * std::sqrt(kPi));
      const auto it = std::lower_bound(lower_.begin(), lower_.end(), lower_tail);
      const auto i = std::min<std::ptrdiff_t>(it - lower_.begin(),
                                              std::ssize(lower_) - 1);
      return k_min_ + static_cast<int>(i);
    }
    const double upper_tail = 0.5 * std::erfc(t * std::sqrt(kPi));
    // upper_ is decreasing; find the last entry strictly above upper_tail.
    const auto it = std::partition_point(
        upper_.begin(), upper_.end(),
        [upper_tail](double tail) { return tail > upper_tail; });
    const auto i = std::max<std::ptrdiff_t>(it - upper_.begin() - 1, 0);
    return k_min_ + static_cast<int>(i);
  }

 private:
  int k_min_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace

void ClweParams::validate() const {
  if (n < 2) {
    throw InvalidParameter("ClweParams: n must be at least 2, got " +
                           std::to_string(n));
  }
  if (!std::isfinite(gamma) || !(gamma > 0.0)) {
    throw InvalidParameter("ClweParams: gamma must be positive");
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw InvalidParameter("ClweParams: beta must be positive");
  }
  if (!(beta < gamma)) {
    throw InvalidParameter("ClweParams: beta must be smaller than gamma");
  }
}

SecretDirection SecretDirection::normalized(std::vector<double> v) {
  if (v.size() < 2) {
    throw InvalidParameter("SecretDirection: dimension must be at least 2");
  }
  require_finite(v, "SecretDirection");
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(),
                                                   v.begin(), 0.0));
  if (!(norm > 0.0)) {
    throw InvalidInput("SecretDirection: zero vector");
  }
  for (double& x : v) {
    x /= norm;
  }
  return SecretDirection(std::move(v));
}

SecretDirection SecretDirection::from_unit(std::vector<double> v,
                                           double tolerance) {
  if (v.size() < 2) {
    throw InvalidParameter("SecretDirection: dimension must be at least 2");
  }
  require_finite(v, "SecretDirection");
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(),
                                                   v.begin(), 0.0));
  if (std::abs(norm - 1.0) > tolerance) {
    throw InvalidInput("SecretDirection: norm " + std::to_string(norm) +
                       " is not 1");
  }
  if (std::abs(norm - 1.0) > 1e-12) {
    return normalized(std::move(v));
  }
  return SecretDirection(std::move(v));
}

double SecretDirection::dot(std::span<const double> y) const {
  return std::inner_product(values_.begin(), values_.end(), y.begin(), 0.0);
}

const char* to_string(UnitConvention units) {
  switch (units) {
    case UnitConvention::Latent:
      return "latent";
    case UnitConvention::Rho:
      return "rho";
  }
  return "unknown";
}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols,
                           UnitConvention units)
    : SampleMatrix(rows, cols, units, std::vector<double>(rows * cols)) {}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols,
                           UnitConvention units, std::vector<double> data)
    : rows_(rows), cols_(cols), units_(units), data_(std::move(data)) {
  if (rows == 0 || cols == 0) {
    throw InvalidParameter("SampleMatrix: rows and cols must be positive");
  }
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("SampleMatrix: data size " +
                            std::to_string(data_.size()) + " != " +
                            std::to_string(rows) + " x " +
                            std::to_string(cols));
  }
}

SampleMatrix SampleMatrix::gaussian(std::size_t rows, std::size_t cols,
                                    UnitConvention units, RandomStream& rng) {
  SampleMatrix out(rows, cols, units);
  const double stddev = units == UnitConvention::Rho ? 1.0 / kSqrtTwoPi : 1.0;
  rng.fill_normal(out.data(), stddev);
  return out;
}

double rho(std::span<const double> x, double s) {
  if (!std::isfinite(s) || !(s > 0.0)) {
    throw InvalidParameter("rho: width must be positive");
  }
  require_finite(x, "rho");
  double sq = 0.0;
  for (double v : x) {
    sq += (v / s) * (v / s);
  }
  return std::exp(-kPi * sq);
}

SecretDirection sample_unit_direction(RandomStream& rng, std::size_t n) {
  if (n < 2) {
    throw InvalidParameter("sample_unit_direction: n must be at least 2");
  }
  std::vector<double> v(n);
  rng.fill_normal(v);
  return SecretDirection::normalized(std::move(v));
}

double hclwe_density_unnormalized(std::span<const double> y,
                                  const SecretDirection& w,
                                  const ClweParams& params) {
  params.validate();
  if (y.size() != w.size()) {
    throw DimensionMismatch("hclwe_density_unnormalized: dimension mismatch");
  }
  require_finite(y, "hclwe_density_unnormalized");
  const double center = params.gamma * w.dot(y);
  const double reach = std::max(3.0, std::ceil(6.0 * params.beta));
  const double k_lo = std::floor(center) - reach;
  const double k_hi = std::ceil(center) + reach;
  double lattice = 0.0;
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    const double u = (k - center) / params.beta;
    lattice += std::exp(-kPi * u * u);
  }
  return rho(y) * lattice;
}

SampleMatrix apply_pancake_shift(const SampleMatrix& samples,
                                 const SecretDirection& w,
                                 const ClweParams& params,
                                 std::span<const double> noise,
                                 PancakeSelection selection) {
  params.validate();
  require_units(samples, UnitConvention::Rho, "hclwe_transform");
  require_dims(samples, w, "hclwe_transform");
  if (noise.size() != samples.rows()) {
    throw DimensionMismatch("apply_pancake_shift: need one noise value per row");
  }
  require_finite(samples.data(), "hclwe_transform");

  const double gamma_prime = params.gamma_prime();
  const double spacing = params.gamma / gamma_prime;
  const PancakeLadder ladder(gamma_prime);

  SampleMatrix out = samples;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto y = out.row(i);
    const double along = w.dot(y);
    double k = 0.0;
    if (selection == PancakeSelection::Nearest) {
      // nearbyint honours the default round-half-to-even mode.
      k = std::nearbyint(gamma_prime * along);
    } else {
      k = static_cast<double>(ladder.select(along));
    }
    const double target = (noise[i] + k * spacing) / gamma_prime;
    const double shift = target - along;
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j] += shift * w[j];
    }
  }
  return out;
}

SampleMatrix hclwe_transform(const SampleMatrix& samples,
                             const SecretDirection& w,
                             const ClweParams& params, RandomStream& rng,
                             PancakeSelection selection) {
  params.validate();
  std::vector<double> noise(samples.rows());
  rng.fill_normal(noise, params.beta / kSqrtTwoPi);
  return apply_pancake_shift(samples, w, params, noise, selection);
}

std::vector<double> z_scores(const SampleMatrix& samples,
                             const SecretDirection& w, double gamma) {
  require_units(samples, UnitConvention::Rho, "z_scores");
  require_dims(samples, w, "z_scores");
  if (!std::isfinite(gamma) || !(gamma > 0.0)) {
    throw InvalidParameter("z_scores: gamma must be positive");
  }
  require_finite(samples.data(), "z_scores");
  std::vector<double> z(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    const double x = gamma * w.dot(samples.row(i));
    double frac = x - std::floor(x);
    // A tiny negative x can round up to exactly 1.
    if (frac >= 1.0) {
      frac = 0.0;
    }
    z[i] = frac;
  }
  return z;
}

SampleMatrix latent_to_rho(SampleMatrix samples) {
  require_units(samples, UnitConvention::Latent, "latent_to_rho");
  const double scale = 1.0 / kSqrtTwoPi;
  for (double& x : samples.data()) {
    x *= scale;
  }
  samples.units_ = UnitConvention::Rho;
  return samples;
}

SampleMatrix rho_to_latent(SampleMatrix samples) {
  require_units(samples, UnitConvention::Rho, "rho_to_latent");
  for (double& x : samples.data()) {
    x *= kSqrtTwoPi;
  }
  samples.units_ = UnitConvention::Latent;
  return samples;
}

}  // namespace cluemark
