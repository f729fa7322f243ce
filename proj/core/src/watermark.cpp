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

#include "cluemark/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cluemark/error.hpp"

namespace cluemark {

namespace {

void require_latent_dims(const LatentTensor& latent, const SecretKey& key,
                         const char* what) {
  if (latent.dims() != key.latent_dims) {
    throw DimensionMismatch(std::string(what) + ": latent is " +
                            latent.dims().to_string() + " but the key expects " +
                            key.latent_dims.to_string());
  }
}

}  // namespace

void SecretKey::validate() const {
  if (format_version != kKeyFormatVersion) {
    throw InvalidParameter("SecretKey: unsupported format version " +
                           std::to_string(format_version));
  }
  params.validate();
  if (params.n != block_shape.volume()) {
    throw InvalidParameter("SecretKey: n = " + std::to_string(params.n) +
                           " but the block holds " +
                           std::to_string(block_shape.volume()) + " entries");
  }
  if (direction.size() != params.n) {
    throw InvalidParameter("SecretKey: direction has dimension " +
                           std::to_string(direction.size()) + ", expected " +
                           std::to_string(params.n));
  }
  if (latent_dims.volume() == 0 || latent_dims.height % 2 != 0 ||
      latent_dims.width % 2 != 0) {
    throw InvalidParameter("SecretKey: latent dims " + latent_dims.to_string() +
                           " need positive extents and even height/width");
  }
  block_shape.validate_against(latent_dims);
}

SecretKey setup(RandomStream& rng, const ClweParams& params,
                const BlockShape& block_shape, const TensorDims& latent_dims) {
  params.validate();
  block_shape.validate_against(latent_dims);
  SecretKey key{sample_unit_direction(rng, params.n), params, block_shape,
                latent_dims, kKeyFormatVersion};
  key.validate();
  return key;
}

LatentTensor mark_latent(const LatentTensor& base, const SecretKey& key,
                         RandomStream& rng) {
  key.validate();
  require_latent_dims(base, key, "mark_latent");
  SampleMatrix samples =
      latent_to_rho(blocks_of(dwt2(base), key.block_shape));
  samples = hclwe_transform(samples, key.direction, key.params, rng);
  return idwt2(unblock(rho_to_latent(std::move(samples)), key.block_shape,
                       key.latent_dims));
}

SampleMatrix detection_samples(const LatentTensor& latent,
                               const SecretKey& key) {
  key.validate();
  require_latent_dims(latent, key, "extract_latent");
  return latent_to_rho(blocks_of(dwt2(latent), key.block_shape));
}

RayleighResult rayleigh_test(std::span<const double> z) {
  if (z.size() < 2) {
    throw InvalidInput("rayleigh_test: need at least 2 z-scores");
  }
  double sum_cos = 0.0;
  double sum_sin = 0.0;
  for (double value : z) {
    if (!std::isfinite(value)) {
      throw InvalidInput("rayleigh_test: non-finite z-score");
    }
    const double angle = 2.0 * std::numbers::pi * value;
    sum_cos += std::cos(angle);
    sum_sin += std::sin(angle);
  }
  const double m = static_cast<double>(z.size());
  RayleighResult result;
  result.mean_resultant = std::min(1.0, std::hypot(sum_cos, sum_sin) / m);
  const double stat = m * result.mean_resultant * result.mean_resultant;
  result.statistic = stat;

  const double s2 = stat * stat;
  const double correction =
      1.0 + (2.0 * stat - s2) / (4.0 * m) -
      (24.0 * stat - 132.0 * s2 + 76.0 * s2 * stat - 9.0 * s2 * s2) /
          (288.0 * m * m);
  if (correction > 0.0) {
    result.log_p_value = std::min(0.0, -stat + std::log(correction));
  } else {
    result.log_p_value = -stat;
  }
  // exp(-Z) underflows to zero past Z ~ 745; log_p_value keeps the scale.
  result.p_value = std::clamp(std::exp(-stat) * correction, 0.0, 1.0);
  return result;
}

DetectionReport extract_latent(const LatentTensor& latent, const SecretKey& key,
                               double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidParameter("extract_latent: threshold must lie in [0, 1]");
  }
  const SampleMatrix samples = detection_samples(latent, key);
  const std::vector<double> z =
      z_scores(samples, key.direction, key.params.gamma);
  const RayleighResult test = rayleigh_test(z);
  return DetectionReport{samples.rows(), test.mean_resultant, test.statistic,
                         test.p_value,   test.log_p_value,    test.p_value < threshold,
                         threshold};
}

}  // namespace cluemark
