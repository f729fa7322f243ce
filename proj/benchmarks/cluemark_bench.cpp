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

#include <benchmark/benchmark.h>

#include "cluemark/attacks.hpp"
#include "cluemark/clwe.hpp"
#include "cluemark/latent.hpp"
#include "cluemark/watermark.hpp"

namespace {

using namespace cluemark;

const TensorDims kDims{4, 64, 64};
const BlockShape kBlock{2, 4, 4};

void BM_Dwt2RoundTrip(benchmark::State& state) {
  RandomStream rng(1);
  const LatentTensor x = LatentTensor::standard_normal(kDims, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(idwt2(dwt2(x)));
  }
}
BENCHMARK(BM_Dwt2RoundTrip);

void BM_HclweTransform(benchmark::State& state) {
  const ClweParams params{32, 2.0, 0.001};
  RandomStream rng(2);
  const SecretDirection w = sample_unit_direction(rng, params.n);
  const SampleMatrix y = SampleMatrix::gaussian(
      static_cast<std::size_t>(state.range(0)), params.n, UnitConvention::Rho, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hclwe_transform(y, w, params, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HclweTransform)->Arg(512)->Arg(1 << 14);

void BM_CovarianceScore(benchmark::State& state) {
  RandomStream rng(3);
  const SampleMatrix y = SampleMatrix::gaussian(
      static_cast<std::size_t>(state.range(0)), 32, UnitConvention::Latent, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(covariance_score(y));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CovarianceScore)->Arg(1000)->Arg(100000);

void BM_MarkAndExtract(benchmark::State& state) {
  RandomStream rng(4);
  const SecretKey key = setup(rng, ClweParams{32, 2.0, 0.001}, kBlock, kDims);
  const LatentTensor base = LatentTensor::standard_normal(kDims, rng);
  for (auto _ : state) {
    const LatentTensor marked = mark_latent(base, key, rng);
    benchmark::DoNotOptimize(extract_latent(marked, key));
  }
}
BENCHMARK(BM_MarkAndExtract);

}  // namespace

BENCHMARK_MAIN();
