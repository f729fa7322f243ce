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

#ifndef CLUEMARK_EVALUATION_HPP
#define CLUEMARK_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cluemark/attacks.hpp"
#include "cluemark/clwe.hpp"
#include "cluemark/latent.hpp"
#include "cluemark/watermark.hpp"

namespace cluemark {

/// Latent-level detection experiment. Each trial uses a fresh key, one
/// marked latent and one independent unmarked latent; both get additive
/// N(0, noise_sigma^2) latent noise before extraction.
struct DetectionTrialConfig {
  ClweParams params{32, 2.0, 0.001};
  BlockShape block_shape{2, 4, 4};
  TensorDims latent_dims{4, 64, 64};
  double noise_sigma = 0.0;
  double threshold = kDefaultThreshold;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct DetectionRocResult {
  /// Scores are Rayleigh statistics Z.
  AucResult roc;
  double true_positive_rate = 0.0;   // at cfg.threshold
  double false_positive_rate = 0.0;  // at cfg.threshold
};

DetectionRocResult detection_roc(const DetectionTrialConfig& cfg);

/// Covariance attack on the DWT blocks of whole latents. A positive trial
/// pools the blocks of `images_per_trial` latents marked under one fresh
/// key; a negative trial pools the blocks of as many unmarked latents.
struct MarkedCovarianceConfig {
  ClweParams params{32, 2.0, 0.001};
  BlockShape block_shape{2, 4, 4};
  TensorDims latent_dims{4, 64, 64};
  std::size_t images_per_trial = 97;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

AucResult marked_latent_covariance_auc(const MarkedCovarianceConfig& cfg);

/// Sample populations for z-score simulations.
enum class ZScoreSource { Gaussian, Hclwe, NoisyHclwe };

/// z-scores of `count` simulated samples of dimension params.n against a
/// fresh random direction. Gaussian draws rho-convention normals; Hclwe
/// transforms them; NoisyHclwe adds isotropic Gaussian noise e afterwards
/// with gamma <e, w> of density proportional to rho_{noise_width}, i.e.
/// noise_width is measured on the same scale as beta.
std::vector<double> simulate_z_scores(ZScoreSource source, std::size_t count,
                                      const ClweParams& params,
                                      double noise_width, RandomStream& rng);

}  // namespace cluemark

#endif  // CLUEMARK_EVALUATION_HPP
