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

#ifndef CLUEMARK_ATTACKS_HPP
#define CLUEMARK_ATTACKS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cluemark/clwe.hpp"
#include "cluemark/latent.hpp"

namespace cluemark {

/// One point of the covariance-attack sweep.
struct AttackTrialConfig {
  std::size_t n = 32;
  std::size_t m = 1000;
  double gamma = 1.0;
  double beta = 0.001;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  /// Sampler used for the CLWE positives.
  PancakeSelection selection = PancakeSelection::Quantile;
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  std::size_t threads = 0;

  void validate() const;
};

struct AucResult {
  double auc = 0.5;
  std::size_t trials = 0;
  std::vector<double> scores_positive;
  std::vector<double> scores_negative;
};

/// P(positive score > negative score), ties counting one half.
double roc_auc(std::span<const double> positive,
               std::span<const double> negative);

/// Max |mu_i - 1/(2 pi)| over the eigenvalues of A^T A / (2 pi m), with A
/// in latent units. Warns on stderr when m < n.
double covariance_score(const SampleMatrix& samples);

/// gamma^2 exp(-pi (beta^2 + gamma^2)), the fixed threshold of the original
/// covariance test.
double theoretical_covariance_threshold(double gamma, double beta);

/// Scores cfg.trials CLWE sample sets (label 1) and as many Gaussian sets
/// (label 0). Trial t draws from derive_substream(derive_seed(seed, t),
/// label), so the output is independent of scheduling.
AucResult covariance_trial_scores(const AttackTrialConfig& cfg);

/// covariance_trial_scores with the AUC filled in.
AucResult covariance_auc(const AttackTrialConfig& cfg);

/// Fraction of correct calls when predicting "CLWE" for score > threshold
/// over a balanced set of positives and negatives.
double threshold_accuracy(std::span<const double> positive,
                          std::span<const double> negative, double threshold);

/// threshold_accuracy of covariance_trial_scores at the theoretical
/// threshold.
double threshold_classifier_accuracy(const AttackTrialConfig& cfg);

struct AveragingResult {
  LatentTensor mean_difference;
  std::vector<LatentTensor> cleaned;
};

/// Estimates a fixed watermark pattern as the mean of marked - unmarked and
/// subtracts it from every marked latent.
AveragingResult averaging_attack(std::span<const LatentTensor> marked,
                                 std::span<const LatentTensor> unmarked);

}  // namespace cluemark

#endif  // CLUEMARK_ATTACKS_HPP
