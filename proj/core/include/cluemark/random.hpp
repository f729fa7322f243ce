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

#ifndef CLUEMARK_RANDOM_HPP
#define CLUEMARK_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace cluemark {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sub-seed for stream `index` of a run seeded with `seed`:
///   mix64(mix64(seed) ^ mix64(index + 0x9e3779b97f4a7c15)).
/// Stable across runs and platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Seeded random stream used everywhere randomness enters the library.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform and normal variates are produced here rather than by
/// the <random> distributions, which are implementation-defined, so a seed
/// yields the same numbers with any standard library.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Marsaglia polar method).
  double normal();

  void fill_normal(std::span<double> out, double stddev = 1.0);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Independent stream `index` of the run seeded with `seed`.
RandomStream derive_substream(std::uint64_t seed, std::uint64_t index);

}  // namespace cluemark

#endif  // CLUEMARK_RANDOM_HPP
