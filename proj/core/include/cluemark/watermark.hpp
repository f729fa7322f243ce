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

#ifndef CLUEMARK_WATERMARK_HPP
#define CLUEMARK_WATERMARK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cluemark/clwe.hpp"
#include "cluemark/latent.hpp"
#include "cluemark/random.hpp"

namespace cluemark {

/// Version 1: single-level orthonormal Haar with quadrant packing, blocks
/// in blocks_of order, pancake index by PancakeSelection::Quantile.
inline constexpr int kKeyFormatVersion = 1;

inline constexpr double kDefaultThreshold = 0.01;

/// Watermarking key. Carries every convention extraction depends on.
struct SecretKey {
  SecretDirection direction;
  ClweParams params;
  BlockShape block_shape;
  TensorDims latent_dims;
  int format_version = kKeyFormatVersion;

  /// Throws InvalidParameter unless n = block volume = direction size, the
  /// block tiles latent_dims, the latent has even spatial extent and the
  /// format version is supported.
  void validate() const;

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

/// Fresh key with a uniformly random direction; params.n must equal the
/// block volume.
SecretKey setup(RandomStream& rng, const ClweParams& params,
                const BlockShape& block_shape, const TensorDims& latent_dims);

/// Embeds the key's pancakes into a latent of iid N(0, 1) entries:
/// dwt2 -> blocks_of -> rho units -> hclwe_transform -> latent units ->
/// unblock -> idwt2.
LatentTensor mark_latent(const LatentTensor& base, const SecretKey& key,
                         RandomStream& rng);

/// DWT-domain blocks of `latent` in rho units, the samples detection reads.
SampleMatrix detection_samples(const LatentTensor& latent,
                               const SecretKey& key);

struct RayleighResult {
  double mean_resultant = 0.0;  // |mean of exp(2 pi i z)|
  double statistic = 0.0;       // Z = m * mean_resultant^2
  double p_value = 1.0;
  double log_p_value = 0.0;
};

/// Rayleigh test of circular uniformity for z-scores on [0, 1).
///
///   p = exp(-Z) [1 + (2Z - Z^2) / (4m)
///                - (24Z - 132Z^2 + 76Z^3 - 9Z^4) / (288 m^2)]
/// clamped to [0, 1]. log_p_value keeps the magnitude once p underflows;
/// where the correction bracket is not positive it falls back to -Z.
RayleighResult rayleigh_test(std::span<const double> z);

struct DetectionReport {
  std::size_t m_samples = 0;
  double mean_resultant = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double log_p_value = 0.0;
  bool decision = false;  // p_value < threshold
  double threshold = kDefaultThreshold;
};

/// Deterministic detection: dwt2 -> blocks_of -> rho units -> z_scores ->
/// rayleigh_test.
DetectionReport extract_latent(const LatentTensor& latent, const SecretKey& key,
                               double threshold = kDefaultThreshold);

}  // namespace cluemark

#endif  // CLUEMARK_WATERMARK_HPP
