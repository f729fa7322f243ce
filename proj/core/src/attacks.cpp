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

#include "cluemark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "cluemark/error.hpp"
#include "cluemark/random.hpp"
#include "parallel.hpp"

namespace cluemark {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double score_positive(const AttackTrialConfig& cfg, RandomStream rng) {
  const ClweParams params{cfg.n, cfg.gamma, cfg.beta};
  const SecretDirection w = sample_unit_direction(rng, cfg.n);
  SampleMatrix base =
      SampleMatrix::gaussian(cfg.m, cfg.n, UnitConvention::Rho, rng);
  SampleMatrix clwe = hclwe_transform(base, w, params, rng, cfg.selection);
  return covariance_score(rho_to_latent(std::move(clwe)));
}

double score_negative(const AttackTrialConfig& cfg, RandomStream rng) {
  return covariance_score(
      SampleMatrix::gaussian(cfg.m, cfg.n, UnitConvention::Latent, rng));
}

}  // namespace

void AttackTrialConfig::validate() const {
  if (trials < 2) {
    throw InvalidParameter("AttackTrialConfig: trials must be at least 2");
  }
  if (m == 0) {
    throw InvalidParameter("AttackTrialConfig: m must be positive");
  }
  ClweParams{n, gamma, beta}.validate();
}

double roc_auc(std::span<const double> positive,
               std::span<const double> negative) {
  if (positive.empty() || negative.empty()) {
    throw InvalidInput("roc_auc: both score sets must be non-empty");
  }
  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(positive.size() + negative.size());
  for (double s : positive) {
    all.push_back({s, true});
  }
  for (double s : negative) {
    all.push_back({s, false});
  }
  for (const Scored& s : all) {
    if (std::isnan(s.score)) {
      throw InvalidInput("roc_auc: NaN score");
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Mann-Whitney U from mid-ranks.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) {
      ++j;
    }
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].positive) {
        positive_rank_sum += mid_rank;
      }
    }
    i = j;
  }
  const auto n_pos = static_cast<double>(positive.size());
  const auto n_neg = static_cast<double>(negative.size());
  const double u = positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0;
  return std::clamp(u / (n_pos * n_neg), 0.0, 1.0);
}

double covariance_score(const SampleMatrix& samples) {
  if (samples.units() != UnitConvention::Latent) {
    throw InvalidInput("covariance_score: samples must be in latent units");
  }
  for (double x : samples.data()) {
    if (!std::isfinite(x)) {
      throw InvalidInput("covariance_score: non-finite entry");
    }
  }
  const auto m = static_cast<Eigen::Index>(samples.rows());
  const auto n = static_cast<Eigen::Index>(samples.cols());
  if (m < n) {
    std::cerr << "warning: covariance_score with m = " << m << " < n = " << n
              << "; the sample covariance is rank deficient\n";
  }
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> a(samples.data().data(), m, n);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  gram /= kTwoPi * static_cast<double>(m);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("covariance_score: eigensolver did not converge");
  }
  const double reference = 1.0 / kTwoPi;
  return (solver.eigenvalues().array() - reference).abs().maxCoeff();
}

double theoretical_covariance_threshold(double gamma, double beta) {
  return gamma * gamma *
         std::exp(-std::numbers::pi * (beta * beta + gamma * gamma));
}

AucResult covariance_trial_scores(const AttackTrialConfig& cfg) {
  cfg.validate();
  AucResult result;
  result.trials = cfg.trials;
  result.scores_positive.assign(cfg.trials, 0.0);
  result.scores_negative.assign(cfg.trials, 0.0);
  detail::parallel_for(2 * cfg.trials, cfg.threads, [&](std::size_t job) {
    const std::size_t trial = job / 2;
    const std::uint64_t label = job % 2;
    RandomStream rng = derive_substream(derive_seed(cfg.seed, trial), label);
    if (label == 1) {
      result.scores_positive[trial] = score_positive(cfg, std::move(rng));
    } else {
      result.scores_negative[trial] = score_negative(cfg, std::move(rng));
    }
  });
  return result;
}

AucResult covariance_auc(const AttackTrialConfig& cfg) {
  AucResult result = covariance_trial_scores(cfg);
  result.auc = roc_auc(result.scores_positive, result.scores_negative);
  return result;
}

double threshold_accuracy(std::span<const double> positive,
                          std::span<const double> negative, double threshold) {
  if (positive.empty() || negative.empty()) {
    throw InvalidInput("threshold_accuracy: both score sets must be non-empty");
  }
  const auto hits = std::count_if(positive.begin(), positive.end(),
                                  [&](double s) { return s > threshold; });
  const auto rejections = std::count_if(negative.begin(), negative.end(),
                                        [&](double s) { return !(s > threshold); });
  // Mean of the per-class accuracies, i.e. accuracy on a balanced set.
  return 0.5 * (static_cast<double>(hits) / static_cast<double>(positive.size()) +
                static_cast<double>(rejections) /
                    static_cast<double>(negative.size()));
}

double threshold_classifier_accuracy(const AttackTrialConfig& cfg) {
  const AucResult scores = covariance_trial_scores(cfg);
  return threshold_accuracy(scores.scores_positive, scores.scores_negative,
                            theoretical_covariance_threshold(cfg.gamma, cfg.beta));
}

AveragingResult averaging_attack(std::span<const LatentTensor> marked,
                                 std::span<const LatentTensor> unmarked) {
  if (marked.size() != unmarked.size()) {
    throw DimensionMismatch("averaging_attack: " + std::to_string(marked.size()) +
                            " marked vs " + std::to_string(unmarked.size()) +
                            " unmarked latents");
  }
  if (marked.empty()) {
    throw InvalidInput("averaging_attack: no latent pairs");
  }
  const TensorDims dims = marked.front().dims();
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (marked[i].dims() != dims || unmarked[i].dims() != dims) {
      throw DimensionMismatch("averaging_attack: pair " + std::to_string(i) +
                              " does not have shape " + dims.to_string());
    }
  }

  AveragingResult result;
  result.mean_difference = LatentTensor(dims);
  auto mean = result.mean_difference.data();
  for (std::size_t i = 0; i < marked.size(); ++i) {
    const auto a = marked[i].data();
    const auto b = unmarked[i].data();
    for (std::size_t j = 0; j < mean.size(); ++j) {
      mean[j] += a[j] - b[j];
    }
  }
  const double count = static_cast<double>(marked.size());
  for (double& x : mean) {
    x /= count;
  }

  result.cleaned.reserve(marked.size());
  for (const LatentTensor& latent : marked) {
    LatentTensor cleaned = latent;
    auto out = cleaned.data();
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] -= mean[j];
    }
    result.cleaned.push_back(std::move(cleaned));
  }
  return result;
}

}  // namespace cluemark
