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

#include "cluemark/latent.hpp"

#include "cluemark/error.hpp"

namespace cluemark {

namespace {

void require_even(const TensorDims& dims, const char* what) {
  if (dims.height % 2 != 0 || dims.width % 2 != 0) {
    throw InvalidParameter(std::string(what) +
                           ": height and width must be even, got " +
                           dims.to_string());
  }
}

// Calls fn(block_row, column, c, h, w) for every tensor entry in
// blocks_of order.
template <typename Fn>
void for_each_block_entry(const TensorDims& dims, const BlockShape& shape,
                          Fn&& fn) {
  const std::size_t groups = dims.channels / shape.channels;
  const std::size_t tiles_h = dims.height / shape.height;
  const std::size_t tiles_w = dims.width / shape.width;
  std::size_t row = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t th = 0; th < tiles_h; ++th) {
      for (std::size_t tw = 0; tw < tiles_w; ++tw, ++row) {
        std::size_t col = 0;
        for (std::size_t dc = 0; dc < shape.channels; ++dc) {
          for (std::size_t dh = 0; dh < shape.height; ++dh) {
            for (std::size_t dw = 0; dw < shape.width; ++dw, ++col) {
              fn(row, col, g * shape.channels + dc, th * shape.height + dh,
                 tw * shape.width + dw);
            }
          }
        }
      }
    }
  }
}

}  // namespace

std::string TensorDims::to_string() const {
  return std::to_string(channels) + "x" + std::to_string(height) + "x" +
         std::to_string(width);
}

LatentTensor::LatentTensor(TensorDims dims)
    : dims_(dims), data_(dims.volume(), 0.0) {}

LatentTensor::LatentTensor(TensorDims dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.volume()) {
    throw DimensionMismatch("LatentTensor: " + std::to_string(data_.size()) +
                            " values do not fill " + dims_.to_string());
  }
}

LatentTensor LatentTensor::standard_normal(TensorDims dims, RandomStream& rng) {
  LatentTensor out(dims);
  rng.fill_normal(out.data());
  return out;
}

void BlockShape::validate_against(const TensorDims& dims) const {
  if (channels == 0 || height == 0 || width == 0) {
    throw InvalidParameter("BlockShape: extents must be positive");
  }
  if (dims.channels % channels != 0) {
    throw InvalidParameter("BlockShape: channel extent " +
                           std::to_string(channels) + " does not divide " +
                           std::to_string(dims.channels) + " channels");
  }
  if (dims.height % height != 0) {
    throw InvalidParameter("BlockShape: height extent " +
                           std::to_string(height) + " does not divide height " +
                           std::to_string(dims.height));
  }
  if (dims.width % width != 0) {
    throw InvalidParameter("BlockShape: width extent " + std::to_string(width) +
                           " does not divide width " +
                           std::to_string(dims.width));
  }
}

LatentTensor dwt2(const LatentTensor& latent) {
  const TensorDims& dims = latent.dims();
  require_even(dims, "dwt2");
  const std::size_t half_h = dims.height / 2;
  const std::size_t half_w = dims.width / 2;
  LatentTensor out(dims);
  for (std::size_t c = 0; c < dims.channels; ++c) {
    for (std::size_t i = 0; i < half_h; ++i) {
      for (std::size_t j = 0; j < half_w; ++j) {
        const double a = latent(c, 2 * i, 2 * j);
        const double b = latent(c, 2 * i, 2 * j + 1);
        const double d = latent(c, 2 * i + 1, 2 * j);
        const double e = latent(c, 2 * i + 1, 2 * j + 1);
        out(c, i, j) = 0.5 * ((a + b) + (d + e));
        out(c, i, j + half_w) = 0.5 * ((a - b) + (d - e));
        out(c, i + half_h, j) = 0.5 * ((a + b) - (d + e));
        out(c, i + half_h, j + half_w) = 0.5 * ((a - b) - (d - e));
      }
    }
  }
  return out;
}

LatentTensor idwt2(const LatentTensor& coeffs) {
  const TensorDims& dims = coeffs.dims();
  require_even(dims, "idwt2");
  const std::size_t half_h = dims.height / 2;
  const std::size_t half_w = dims.width / 2;
  LatentTensor out(dims);
  for (std::size_t c = 0; c < dims.channels; ++c) {
    for (std::size_t i = 0; i < half_h; ++i) {
      for (std::size_t j = 0; j < half_w; ++j) {
        const double ll = coeffs(c, i, j);
        const double lh = coeffs(c, i, j + half_w);
        const double hl = coeffs(c, i + half_h, j);
        const double hh = coeffs(c, i + half_h, j + half_w);
        out(c, 2 * i, 2 * j) = 0.5 * ((ll + lh) + (hl + hh));
        out(c, 2 * i, 2 * j + 1) = 0.5 * ((ll - lh) + (hl - hh));
        out(c, 2 * i + 1, 2 * j) = 0.5 * ((ll + lh) - (hl + hh));
        out(c, 2 * i + 1, 2 * j + 1) = 0.5 * ((ll - lh) - (hl - hh));
      }
    }
  }
  return out;
}

SampleMatrix blocks_of(const LatentTensor& tensor, const BlockShape& shape,
                       UnitConvention units) {
  shape.validate_against(tensor.dims());
  const std::size_t n = shape.volume();
  SampleMatrix out(tensor.dims().volume() / n, n, units);
  for_each_block_entry(tensor.dims(), shape,
                       [&](std::size_t row, std::size_t col, std::size_t c,
                           std::size_t h, std::size_t w) {
                         out(row, col) = tensor(c, h, w);
                       });
  return out;
}

LatentTensor unblock(const SampleMatrix& samples, const BlockShape& shape,
                     const TensorDims& dims) {
  shape.validate_against(dims);
  if (samples.cols() != shape.volume() ||
      samples.rows() * samples.cols() != dims.volume()) {
    throw DimensionMismatch("unblock: " + std::to_string(samples.rows()) +
                            " x " + std::to_string(samples.cols()) +
                            " samples do not tile " + dims.to_string());
  }
  LatentTensor out(dims);
  for_each_block_entry(dims, shape,
                       [&](std::size_t row, std::size_t col, std::size_t c,
                           std::size_t h, std::size_t w) {
                         out(c, h, w) = samples(row, col);
                       });
  return out;
}

}  // namespace cluemark
