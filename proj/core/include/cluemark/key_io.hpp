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

#ifndef CLUEMARK_KEY_IO_HPP
#define CLUEMARK_KEY_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "cluemark/watermark.hpp"

namespace cluemark {

/// A key plus the detection threshold it ships with.
struct KeyFile {
  SecretKey key;
  double threshold = kDefaultThreshold;

  friend bool operator==(const KeyFile&, const KeyFile&) = default;
};

/// Canonical text form, one `name = value` per line in this order:
///
///   format_version = 1
///   gamma = <real>
///   beta = <real>
///   block_shape = <bc> <bh> <bw>
///   latent_dims = <c> <h> <w>
///   threshold = <real>
///   direction = <n reals>
///
/// Reals use the shortest representation that round-trips exactly. Blank
/// lines and lines starting with '#' are ignored on input.
std::string format_key(const KeyFile& key_file);

/// Parses format_key output. Unknown, duplicate or missing fields, a
/// direction whose norm is off by more than 1e-9 and any SecretKey
/// invariant violation raise FormatError.
KeyFile parse_key(std::string_view text);

KeyFile read_key(const std::filesystem::path& path);
void write_key(const KeyFile& key_file, const std::filesystem::path& path);

}  // namespace cluemark

#endif  // CLUEMARK_KEY_IO_HPP
