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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cluemark/clwe.hpp"
#include "cluemark/error.hpp"
#include "cluemark/stats.hpp"
#include "oracles.hpp"

namespace cluemark {
namespace {

constexpr double kPi = std::numbers::pi;
const double kRhoStd = 1.0 / std::sqrt(2.0 * kPi);

SecretDirection axis(std::size_t n, std::size_t i) {
  std::vector<double> v(n, 0.0);
  v[i] = 1.0;
  return SecretDirection::from_unit(v);
}

std::vector<double> projections(const SampleMatrix& samples,
                                std::span<const double> v) {
  std::vector<double> out(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < samples.cols(); ++j) {
      dot += samples(i, j) * v[j];
    }
    out[i] = dot;
  }
  return out;
}

TEST(ClweParams, Validation) {
  EXPECT_NO_THROW((ClweParams{32, 2.0, 0.001}.validate()));
  EXPECT_THROW((ClweParams{1, 2.0, 0.001}.validate()), InvalidParameter);
  EXPECT_THROW((ClweParams{32, 0.0, 0.001}.validate()), InvalidParameter);
  EXPECT_THROW((ClweParams{32, 2.0, 0.0}.validate()), InvalidParameter);
  EXPECT_THROW((ClweParams{32, 2.0, -0.1}.validate()), InvalidParameter);
  EXPECT_THROW((ClweParams{32, 2.0, 2.0}.validate()), InvalidParameter);
  EXPECT_THROW((ClweParams{32, std::nan(""), 0.1}.validate()), InvalidParameter);
  EXPECT_DOUBLE_EQ((ClweParams{32, 2.0, 0.001}.gamma_prime()),
                   std::sqrt(4.0 + 1e-6));
}

TEST(Rho, AnalyticValues) {
  const std::vector<double> zero(5, 0.0);
  EXPECT_DOUBLE_EQ(rho(zero, 0.7), 1.0);
  const std::vector<double> one{1.0};
  EXPECT_NEAR(rho(one, 1.0), std::exp(-kPi), 1e-15);
  EXPECT_NEAR(rho(one, 1.0), 0.0432139, 1e-7);
  const std::vector<double> two{2.0, 0.0};
  EXPECT_NEAR(rho(two, 2.0), std::exp(-kPi), 1e-15);
}

TEST(Rho, RejectsBadInput) {
  const std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(rho(bad, 1.0), InvalidInput);
  const std::vector<double> nan{std::nan("")};
  EXPECT_THROW(rho(nan, 1.0), InvalidInput);
  const std::vector<double> ok{1.0};
  EXPECT_THROW(rho(ok, 0.0), InvalidParameter);
}

TEST(SecretDirection, UnitNormAndDeterminism) {
  RandomStream a(17);
  RandomStream b(17);
  const SecretDirection w = sample_unit_direction(a, 32);
  const SecretDirection w2 = sample_unit_direction(b, 32);
  double norm = 0.0;
  for (double x : w.values()) norm += x * x;
  EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-12);
  EXPECT_EQ(w, w2);
  EXPECT_THROW(sample_unit_direction(a, 1), InvalidParameter);
}

TEST(SecretDirection, FromUnitChecksNorm) {
  EXPECT_NO_THROW(SecretDirection::from_unit({0.6, 0.8}));
  EXPECT_THROW(SecretDirection::from_unit({0.66, 0.88}), InvalidInput);
  EXPECT_THROW(SecretDirection::from_unit({1.0}), InvalidParameter);
  EXPECT_THROW(SecretDirection::normalized({0.0, 0.0}), InvalidInput);
}

TEST(SecretDirection, SphereSymmetry) {
  RandomStream rng(8);
  constexpr int kDraws = 10000;
  std::vector<double> mean(3, 0.0);
  for (int i = 0; i < kDraws; ++i) {
    const SecretDirection w = sample_unit_direction(rng, 3);
    for (int j = 0; j < 3; ++j) mean[j] += w[j] / kDraws;
  }
  for (double m : mean) {
    EXPECT_LT(std::abs(m), 0.05);
  }
}

TEST(HclweDensity, OriginAndGap) {
  const ClweParams params{2, 2.0, 0.001};
  const SecretDirection w = axis(2, 0);
  const std::vector<double> origin{0.0, 0.0};
  EXPECT_NEAR(hclwe_density_unnormalized(origin, w, params), 1.0, 1e-15);
  // gamma <w, y> = 0.5 sits halfway between pancakes.
  const std::vector<double> gap{0.25, 0.3};
  const double bound = rho(gap) * 2.0 * std::exp(-kPi * 250000.0);
  EXPECT_LE(hclwe_density_unnormalized(gap, w, params), bound);
}

TEST(HclweDensity, MatchesUntruncatedSum) {
  const ClweParams params{4, 2.0, 0.1};
  RandomStream rng(4);
  const SecretDirection w = sample_unit_direction(rng, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(4);
    rng.fill_normal(y, kRhoStd);
    double dot = 0.0, sq = 0.0;
    for (int j = 0; j < 4; ++j) {
      dot += w[j] * y[j];
      sq += y[j] * y[j];
    }
    double lattice = 0.0;
    for (int k = -40; k <= 40; ++k) {
      const double u = (k - params.gamma * dot) / params.beta;
      lattice += std::exp(-kPi * u * u);
    }
    const double expected = std::exp(-kPi * sq) * lattice;
    EXPECT_NEAR(hclwe_density_unnormalized(y, w, params), expected,
                1e-15 * expected + 1e-300);
  }
}

TEST(HclweDensity, MarginalPeaksNearMultiplesOfInverseGamma) {
  const ClweParams params{2, 2.0, 0.1};
  const SecretDirection w = axis(2, 0);
  std::vector<double> ts;
  std::vector<double> f;
  for (int i = -1500; i <= 1500; ++i) {
    const double t = i * 1e-3;
    const std::vector<double> y{t, 0.0};
    ts.push_back(t);
    f.push_back(hclwe_density_unnormalized(y, w, params));
  }
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (f[i] > f[i - 1] && f[i] >= f[i + 1] && f[i] > 1e-6) {
      peaks.push_back(ts[i]);
    }
  }
  ASSERT_GE(peaks.size(), 5u);
  ASSERT_EQ(peaks.size() % 2, 1u);
  const double centre = static_cast<double>(peaks.size() / 2);
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const double k = static_cast<double>(i) - centre;
    EXPECT_NEAR(peaks[i], k / params.gamma, 0.01);
  }
}

TEST(HclweTransform, HandExecutedExamples) {
  // gamma = 2 with a vanishing beta: gamma' == 2 exactly and z forced to 0.
  const ClweParams params{2, 2.0, 1e-9};
  ASSERT_EQ(params.gamma_prime(), 2.0);
  const SecretDirection w = axis(2, 0);
  SampleMatrix y(2, 2, UnitConvention::Rho, {0.6, 1.3, 0.24, -0.7});
  const std::vector<double> zero_noise{0.0, 0.0};
  for (PancakeSelection sel : {PancakeSelection::Nearest, PancakeSelection::Quantile}) {
    const SampleMatrix out = apply_pancake_shift(y, w, params, zero_noise, sel);
    EXPECT_NEAR(out(0, 0), 0.5, 1e-15);
    EXPECT_EQ(out(0, 1), 1.3);
    EXPECT_NEAR(out(1, 0), 0.0, 1e-15);
    EXPECT_EQ(out(1, 1), -0.7);
  }
}

TEST(HclweTransform, NearestRoundsHalfToEven) {
  const ClweParams params{2, 2.0, 1e-9};
  const SecretDirection w = axis(2, 0);
  // gamma' <y, w> = 0.5 and 1.5 exactly.
  SampleMatrix y(2, 2, UnitConvention::Rho, {0.25, 0.0, 0.75, 0.0});
  const std::vector<double> zero_noise{0.0, 0.0};
  const SampleMatrix out =
      apply_pancake_shift(y, w, params, zero_noise, PancakeSelection::Nearest);
  EXPECT_NEAR(out(0, 0), 0.0, 1e-15);  // round(0.5) = 0
  EXPECT_NEAR(out(1, 0), 1.0, 1e-15);  // round(1.5) = 2 -> 2 * 0.5
}

TEST(HclweTransform, QuantileIndexIsMonotone) {
  const ClweParams params{2, 2.0, 1e-9};
  const SecretDirection w = axis(2, 0);
  constexpr std::size_t kRows = 4001;
  SampleMatrix y(kRows, 2, UnitConvention::Rho);
  for (std::size_t i = 0; i < kRows; ++i) {
    y(i, 0) = -2.0 + 1e-3 * static_cast<double>(i);
  }
  const std::vector<double> zero_noise(kRows, 0.0);
  const SampleMatrix out = apply_pancake_shift(y, w, params, zero_noise);
  for (std::size_t i = 1; i < kRows; ++i) {
    ASSERT_GE(out(i, 0), out(i - 1, 0));
  }
  EXPECT_NEAR(out(0, 0), -2.0, 0.51);
  EXPECT_NEAR(out(kRows - 1, 0), 2.0, 0.51);
}

TEST(HclweTransform, OrthogonalComponentUnchanged) {
  const ClweParams params{32, 2.0, 0.001};
  RandomStream rng(21);
  const SecretDirection w = sample_unit_direction(rng, 32);
  const SampleMatrix y = SampleMatrix::gaussian(200, 32, UnitConvention::Rho, rng);
  const SampleMatrix out = hclwe_transform(y, w, params, rng);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const double a = w.dot(y.row(i));
    const double b = w.dot(out.row(i));
    for (std::size_t j = 0; j < 32; ++j) {
      ASSERT_NEAR(y(i, j) - a * w[j], out(i, j) - b * w[j], 1e-12);
    }
  }
}

TEST(HclweTransform, Deterministic) {
  const ClweParams params{32, 2.0, 0.001};
  RandomStream setup_rng(5);
  const SecretDirection w = sample_unit_direction(setup_rng, 32);
  const SampleMatrix y =
      SampleMatrix::gaussian(100, 32, UnitConvention::Rho, setup_rng);
  RandomStream a(9);
  RandomStream b(9);
  const SampleMatrix out_a = hclwe_transform(y, w, params, a);
  const SampleMatrix out_b = hclwe_transform(y, w, params, b);
  ASSERT_TRUE(std::equal(out_a.data().begin(), out_a.data().end(),
                         out_b.data().begin()));
}

TEST(HclweTransform, RejectsMismatchedInput) {
  const ClweParams params{4, 2.0, 0.001};
  RandomStream rng(1);
  const SecretDirection w = sample_unit_direction(rng, 4);
  const SampleMatrix latent(3, 4, UnitConvention::Latent);
  EXPECT_THROW(hclwe_transform(latent, w, params, rng), InvalidInput);
  const SampleMatrix wrong_cols(3, 5, UnitConvention::Rho);
  EXPECT_THROW(hclwe_transform(wrong_cols, w, params, rng), DimensionMismatch);
  EXPECT_THROW(z_scores(latent, w, 2.0), InvalidInput);
}

class SamplerDensityAgreement
    : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(SamplerDensityAgreement, ProjectionFollowsHclweMarginal) {
  const auto [gamma, beta] = GetParam();
  const ClweParams params{8, gamma, beta};
  RandomStream rng(derive_seed(31337, static_cast<std::uint64_t>(beta * 1e6)));
  const SecretDirection w = sample_unit_direction(rng, params.n);
  const SampleMatrix base =
      SampleMatrix::gaussian(50000, params.n, UnitConvention::Rho, rng);
  const SampleMatrix out = hclwe_transform(base, w, params, rng);

  const testing::HclweMarginalCdf marginal(gamma, beta);
  const KsResult along = ks_test(projections(out, w.values()), marginal);
  EXPECT_GT(along.p_value, 0.001) << "D = " << along.statistic;

  // Any direction orthogonal to w keeps the base Gaussian law.
  std::vector<double> v(params.n);
  rng.fill_normal(v);
  const double vw = w.dot(v);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= vw * w[j];
  const SecretDirection v_unit = SecretDirection::normalized(v);
  const KsResult ortho =
      ks_test(projections(out, v_unit.values()),
              [](double t) { return normal_cdf(t, 1.0 / std::sqrt(2.0 * kPi)); });
  EXPECT_GT(ortho.p_value, 0.001) << "D = " << ortho.statistic;
}

INSTANTIATE_TEST_SUITE_P(Gamma2, SamplerDensityAgreement,
                         ::testing::Values(std::make_pair(2.0, 0.1),
                                           std::make_pair(2.0, 0.001)));

TEST(HclweTransform, LiteralRoundingMisweightsPancakes) {
  // The nearest-index rule is kept for comparison; at gamma = 2 its pancake
  // masses are visibly off the hCLWE weights.
  const ClweParams params{8, 2.0, 0.1};
  RandomStream rng(404);
  const SecretDirection w = sample_unit_direction(rng, params.n);
  const SampleMatrix base =
      SampleMatrix::gaussian(50000, params.n, UnitConvention::Rho, rng);
  const SampleMatrix out =
      hclwe_transform(base, w, params, rng, PancakeSelection::Nearest);
  const KsResult ks = ks_test(projections(out, w.values()),
                              testing::HclweMarginalCdf(2.0, 0.1));
  EXPECT_LT(ks.p_value, 1e-6);
  EXPECT_GT(ks.statistic, 0.01);
}

TEST(ZScores, Examples) {
  const SecretDirection w = axis(2, 0);
  SampleMatrix y(3, 2, UnitConvention::Rho, {0.5, 1.3, 0.3, 9.9, -0.2, 0.0});
  const std::vector<double> z = z_scores(y, w, 2.0);
  EXPECT_EQ(z[0], 0.0);
  EXPECT_NEAR(z[1], 0.6, 1e-12);
  EXPECT_NEAR(z[2], 0.6, 1e-12);
}

TEST(ZScores, TinyNegativeWrapsIntoRange) {
  const SecretDirection w = axis(2, 0);
  SampleMatrix y(1, 2, UnitConvention::Rho, {-1e-18, 0.0});
  const std::vector<double> z = z_scores(y, w, 2.0);
  EXPECT_GE(z[0], 0.0);
  EXPECT_LT(z[0], 1.0);
}

TEST(ZScores, ConcentrateAtZeroForFreshSamples) {
  const ClweParams params{32, 2.0, 0.001};
  RandomStream rng(55);
  const SecretDirection w = sample_unit_direction(rng, params.n);
  const SampleMatrix out = hclwe_transform(
      SampleMatrix::gaussian(10000, params.n, UnitConvention::Rho, rng), w,
      params, rng);
  const double band = 3.0 * params.beta / params.gamma_prime();
  int inside = 0;
  for (double z : z_scores(out, w, params.gamma)) {
    if (z <= band || z >= 1.0 - band) ++inside;
  }
  EXPECT_GE(inside, 9900);
}

TEST(UnitConversion, ScalesByInverseSqrtTwoPi) {
  SampleMatrix latent(1, 2, UnitConvention::Latent, {1.0, -2.0});
  const SampleMatrix r = latent_to_rho(latent);
  EXPECT_EQ(r.units(), UnitConvention::Rho);
  EXPECT_NEAR(r(0, 0), 0.3989423, 1e-7);
  EXPECT_THROW(latent_to_rho(r), InvalidInput);
  EXPECT_THROW(rho_to_latent(latent), InvalidInput);
}

TEST(UnitConversion, RoundTrip) {
  RandomStream rng(6);
  const SampleMatrix x = SampleMatrix::gaussian(100, 8, UnitConvention::Latent, rng);
  const SampleMatrix back = rho_to_latent(latent_to_rho(x));
  for (std::size_t i = 0; i < x.data().size(); ++i) {
    ASSERT_NEAR(back.data()[i], x.data()[i], 1e-15 * std::abs(x.data()[i]));
  }
}

TEST(UnitConversion, GaussianVarianceBecomesInverseTwoPi) {
  RandomStream rng(61);
  const SampleMatrix rho_units = latent_to_rho(
      SampleMatrix::gaussian(10000, 10, UnitConvention::Latent, rng));
  const double expected = 1.0 / (2.0 * kPi);
  const double n = static_cast<double>(rho_units.data().size());
  const double sigma = expected * std::sqrt(2.0 / (n - 1.0));
  EXPECT_NEAR(testing::sample_variance(rho_units.data()), expected, 3.0 * sigma);
}

}  // namespace
}  // namespace cluemark
