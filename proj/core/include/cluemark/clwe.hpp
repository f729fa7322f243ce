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

#ifndef CLUEMARK_CLWE_HPP
#define CLUEMARK_CLWE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cluemark/random.hpp"

namespace cluemark {

/// Pancake geometry of the homogeneous CLWE distribution.
///
/// `gamma` sets the pancake frequency along the secret direction and `beta`
/// their width. Invariants: n >= 2, 0 < beta < gamma.
struct ClweParams {
  std::size_t n = 0;
  double gamma = 0.0;
  double beta = 0.0;

  /// sqrt(beta^2 + gamma^2), the effective frequency used by the sampler.
  double gamma_prime() const { return std::hypot(beta, gamma); }

  /// Throws InvalidParameter naming the violated invariant.
  void validate() const;

  friend bool operator==(const ClweParams&, const ClweParams&) = default;
};

/// Unit vector defining the pancake orientation.
class SecretDirection {
 public:
  /// Scales `v` to unit length. Throws for size < 2, non-finite or zero input.
  static SecretDirection normalized(std::vector<double> v);

  /// Accepts `v` only if | |v| - 1 | <= tolerance. Deviations above 1e-12
  /// are renormalized so the stored vector always meets the tight bound.
  static SecretDirection from_unit(std::vector<double> v,
                                   double tolerance = 1e-9);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double dot(std::span<const double> y) const;

  friend bool operator==(const SecretDirection&,
                         const SecretDirection&) = default;

 private:
  explicit SecretDirection(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// Normalization of sample coordinates.
///
/// Latent: unit-covariance Gaussian, as consumed by diffusion models.
/// Rho: covariance I/(2 pi), the convention of rho_s and of all CLWE math.
enum class UnitConvention { Latent, Rho };

const char* to_string(UnitConvention units);

/// m samples of dimension n, stored row-major. Row i is sample y_i.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t rows, std::size_t cols, UnitConvention units);
  SampleMatrix(std::size_t rows, std::size_t cols, UnitConvention units,
               std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  UnitConvention units() const { return units_; }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Standard Gaussian samples in the requested convention.
  static SampleMatrix gaussian(std::size_t rows, std::size_t cols,
                               UnitConvention units, RandomStream& rng);

 private:
  friend SampleMatrix latent_to_rho(SampleMatrix samples);
  friend SampleMatrix rho_to_latent(SampleMatrix samples);

  std::size_t rows_;
  std::size_t cols_;
  UnitConvention units_;
  std::vector<double> data_;
};

/// rho_s(x) = exp(-pi |x / s|^2).
double rho(std::span<const double> x, double s = 1.0);

/// Uniform direction on the unit sphere in R^n (normalized iid normals).
SecretDirection sample_unit_direction(RandomStream& rng, std::size_t n);

/// rho(y) * sum_k rho_beta(k - gamma <w, y>), lattice sum truncated to the
/// integers within max(3, ceil(6 beta)) of gamma <w, y>.
double hclwe_density_unnormalized(std::span<const double> y,
                                  const SecretDirection& w,
                                  const ClweParams& params);

/// How the sampler assigns each input to a pancake index k.
///
/// Nearest is the literal rule k = round(gamma' <y, w>). It is close to, but
/// not exactly, the hCLWE law: the rounding intervals give pancake k the
/// Gaussian mass of a width-1/gamma' window instead of a weight proportional
/// to rho_gamma'(k), which at gamma = 2 inflates the variance along w by
/// about 13%.
///
/// Quantile maps <y, w> through the Gaussian CDF into the quantiles of the
/// discrete Gaussian with weights rho_gamma'(k). k stays monotone in the
/// projection (and equals the nearest index for typical inputs), and the
/// output follows the hCLWE density exactly when the input is Gaussian in
/// the rho convention.
enum class PancakeSelection { Quantile, Nearest };

/// Moves each sample onto a pancake along `w`:
///   y' = y + ((z + k * gamma / gamma') / gamma' - <y, w>) * w
/// with z ~ density proportional to rho_beta (standard deviation
/// beta / sqrt(2 pi)). Components orthogonal to w are untouched.
SampleMatrix hclwe_transform(
    const SampleMatrix& samples, const SecretDirection& w,
    const ClweParams& params, RandomStream& rng,
    PancakeSelection selection = PancakeSelection::Quantile);

/// hclwe_transform with caller-supplied noise values z_i (one per row).
SampleMatrix apply_pancake_shift(
    const SampleMatrix& samples, const SecretDirection& w,
    const ClweParams& params, std::span<const double> noise,
    PancakeSelection selection = PancakeSelection::Quantile);

/// z_i = gamma <y_i, w> mod 1, mapped into [0, 1).
std::vector<double> z_scores(const SampleMatrix& samples,
                             const SecretDirection& w, double gamma);

/// Latent -> rho units (scale by 1 / sqrt(2 pi)) and back.
SampleMatrix latent_to_rho(SampleMatrix samples);
SampleMatrix rho_to_latent(SampleMatrix samples);

}  // namespace cluemark

#endif  // CLUEMARK_CLWE_HPP
