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

#ifndef CLUEMARK_LATENT_HPP
#define CLUEMARK_LATENT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cluemark/clwe.hpp"
#include "cluemark/random.hpp"

namespace cluemark {

struct TensorDims {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t volume() const { return channels * height * width; }
  std::string to_string() const;

  friend bool operator==(const TensorDims&, const TensorDims&) = default;
};

/// Dense (channels x height x width) tensor, C-contiguous.
class LatentTensor {
 public:
  LatentTensor() = default;
  explicit LatentTensor(TensorDims dims);
  LatentTensor(TensorDims dims, std::vector<double> data);

  const TensorDims& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t c, std::size_t h, std::size_t w) {
    return data_[(c * dims_.height + h) * dims_.width + w];
  }
  double operator()(std::size_t c, std::size_t h, std::size_t w) const {
    return data_[(c * dims_.height + h) * dims_.width + w];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// iid N(0, 1) entries.
  static LatentTensor standard_normal(TensorDims dims, RandomStream& rng);

  friend bool operator==(const LatentTensor&, const LatentTensor&) = default;

 private:
  TensorDims dims_;
  std::vector<double> data_;
};

/// Block extent along channel, height and width.
struct BlockShape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t volume() const { return channels * height * width; }

  /// Throws InvalidParameter naming the first axis `dims` is not divisible
  /// along.
  void validate_against(const TensorDims& dims) const;

  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

/// Single-level orthonormal 2-D Haar transform of every channel.
///
/// Each 2x2 input cell (a b / c d) produces
///   LL = (a + b + c + d) / 2,  LH = (a - b + c - d) / 2,
///   HL = (a + b - c - d) / 2,  HH = (a - b - c + d) / 2,
/// packed as quadrants: LL top-left, LH top-right, HL bottom-left,
/// HH bottom-right. Height and width must be even.
LatentTensor dwt2(const LatentTensor& latent);

/// Inverse of dwt2.
LatentTensor idwt2(const LatentTensor& coeffs);

/// Splits the tensor into non-overlapping blocks, one sample per row.
///
/// Rows enumerate channel groups first, then spatial tiles in row-major
/// order. Inside a block, entries are flattened channel-major, then
/// row-major.
SampleMatrix blocks_of(const LatentTensor& tensor, const BlockShape& shape,
                       UnitConvention units = UnitConvention::Latent);

/// Inverse of blocks_of.
LatentTensor unblock(const SampleMatrix& samples, const BlockShape& shape,
                     const TensorDims& dims);

}  // namespace cluemark

#endif  // CLUEMARK_LATENT_HPP
