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

#ifndef CLUEMARK_NPY_HPP
#define CLUEMARK_NPY_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "cluemark/latent.hpp"

namespace cluemark {

/// Element types accepted in tensor files.
enum class NpyDtype { Float32, Float64 };

/// NPY v1.0 encoding of a rank-3 C-ordered tensor. The header is padded
/// with spaces so the payload starts on a 64-byte boundary.
std::string encode_npy(const LatentTensor& tensor,
                       NpyDtype dtype = NpyDtype::Float64);

/// Parses NPY v1.0 bytes holding '<f4' or '<f8' data of rank 3 in C order.
/// Throws FormatError with the reason otherwise.
LatentTensor decode_npy(std::string_view bytes);

LatentTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const LatentTensor& tensor, const std::filesystem::path& path,
                  NpyDtype dtype = NpyDtype::Float64);

}  // namespace cluemark

#endif  // CLUEMARK_NPY_HPP
