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

#include "cluemark/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "cluemark/error.hpp"
#include "cluemark/random.hpp"
#include "parallel.hpp"

namespace cluemark {

namespace {

void add_noise(LatentTensor& latent, double sigma, RandomStream& rng) {
  if (sigma <= 0.0) {
    return;
  }
  for (double& x : latent.data()) {
    x += sigma * rng.normal();
  }
}

}  // namespace

DetectionRocResult detection_roc(const DetectionTrialConfig& cfg) {
  if (cfg.trials < 2) {
    throw InvalidParameter("detection_roc: trials must be at least 2");
  }
  if (!(cfg.noise_sigma >= 0.0)) {
    throw InvalidParameter("detection_roc: noise_sigma must be non-negative");
  }
  DetectionRocResult result;
  result.roc.trials = cfg.trials;
  result.roc.scores_positive.assign(cfg.trials, 0.0);
  result.roc.scores_negative.assign(cfg.trials, 0.0);
  std::vector<char> positive_hit(cfg.trials, 0);
  std::vector<char> negative_hit(cfg.trials, 0);

  detail::parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, trial);
    RandomStream key_rng = derive_substream(trial_seed, 0);
    const SecretKey key =
        setup(key_rng, cfg.params, cfg.block_shape, cfg.latent_dims);

    RandomStream pos_rng = derive_substream(trial_seed, 1);
    LatentTensor marked = mark_latent(
        LatentTensor::standard_normal(cfg.latent_dims, pos_rng), key, pos_rng);
    add_noise(marked, cfg.noise_sigma, pos_rng);
    const DetectionReport pos = extract_latent(marked, key, cfg.threshold);

    RandomStream neg_rng = derive_substream(trial_seed, 2);
    LatentTensor unmarked = LatentTensor::standard_normal(cfg.latent_dims, neg_rng);
    add_noise(unmarked, cfg.noise_sigma, neg_rng);
    const DetectionReport neg = extract_latent(unmarked, key, cfg.threshold);

    result.roc.scores_positive[trial] = pos.statistic;
    result.roc.scores_negative[trial] = neg.statistic;
    positive_hit[trial] = pos.decision ? 1 : 0;
    negative_hit[trial] = neg.decision ? 1 : 0;
  });

  result.roc.auc = roc_auc(result.roc.scores_positive, result.roc.scores_negative);
  const auto trials = static_cast<double>(cfg.trials);
  result.true_positive_rate =
      static_cast<double>(std::count(positive_hit.begin(), positive_hit.end(), 1)) /
      trials;
  result.false_positive_rate =
      static_cast<double>(std::count(negative_hit.begin(), negative_hit.end(), 1)) /
      trials;
  return result;
}

AucResult marked_latent_covariance_auc(const MarkedCovarianceConfig& cfg) {
  if (cfg.trials < 2 || cfg.images_per_trial == 0) {
    throw InvalidParameter(
        "marked_latent_covariance_auc: need >= 2 trials and >= 1 image");
  }
  const std::size_t n = cfg.block_shape.volume();
  const std::size_t per_image = cfg.latent_dims.volume() / n;
  const std::size_t rows = per_image * cfg.images_per_trial;

  AucResult result;
  result.trials = cfg.trials;
  result.scores_positive.assign(cfg.trials, 0.0);
  result.scores_negative.assign(cfg.trials, 0.0);

  detail::parallel_for(2 * cfg.trials, cfg.threads, [&](std::size_t job) {
    const std::size_t trial = job / 2;
    const bool positive = job % 2 == 1;
    RandomStream rng = derive_substream(derive_seed(cfg.seed, trial), job % 2);
    std::optional<SecretKey> key;
    if (positive) {
      key = setup(rng, cfg.params, cfg.block_shape, cfg.latent_dims);
    }
    SampleMatrix pooled(rows, n, UnitConvention::Latent);
    for (std::size_t image = 0; image < cfg.images_per_trial; ++image) {
      LatentTensor latent = LatentTensor::standard_normal(cfg.latent_dims, rng);
      if (key) {
        latent = mark_latent(latent, *key, rng);
      }
      const SampleMatrix blocks = blocks_of(dwt2(latent), cfg.block_shape);
      std::copy(blocks.data().begin(), blocks.data().end(),
                pooled.data().begin() +
                    static_cast<std::ptrdiff_t>(image * blocks.data().size()));
    }
    const double score = covariance_score(pooled);
    if (positive) {
      result.scores_positive[trial] = score;
    } else {
      result.scores_negative[trial] = score;
    }
  });
  result.auc = roc_auc(result.scores_positive, result.scores_negative);
  return result;
}

std::vector<double> simulate_z_scores(ZScoreSource source, std::size_t count,
                                      const ClweParams& params,
                                      double noise_width, RandomStream& rng) {
  params.validate();
  if (count == 0) {
    throw InvalidParameter("simulate_z_scores: count must be positive");
  }
  const SecretDirection w = sample_unit_direction(rng, params.n);
  SampleMatrix samples =
      SampleMatrix::gaussian(count, params.n, UnitConvention::Rho, rng);
  if (source != ZScoreSource::Gaussian) {
    samples = hclwe_transform(samples, w, params, rng);
  }
  if (source == ZScoreSource::NoisyHclwe) {
    if (!(noise_width > 0.0)) {
      throw InvalidParameter("simulate_z_scores: noise width must be positive");
    }
    const double stddev =
        noise_width / (params.gamma * std::sqrt(2.0 * std::numbers::pi));
    for (double& x : samples.data()) {
      x += stddev * rng.normal();
    }
  }
  return z_scores(samples, w, params.gamma);
}

}  // namespace cluemark
