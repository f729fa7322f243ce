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

#include "cluemark/npy.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <vector>

#include "cluemark/error.hpp"

namespace cluemark {

namespace {

constexpr std::string_view kMagic{"\x93NUMPY", 6};
constexpr std::size_t kPreambleSize = 10;  // magic + version + header length
constexpr std::size_t kAlignment = 64;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T load_le(const char* p) {
  std::array<char, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(raw.begin(), raw.end());
  }
  T value;
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

template <typename T>
void store_le(T value, std::string& out) {
  std::array<char, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(raw.begin(), raw.end());
  }
  out.append(raw.data(), raw.size());
}

// Minimal reader for the Python dict literal in an NPY header.
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  std::optional<std::string_view> raw_value(std::string_view key) const {
    const std::string quoted_single = "'" + std::string(key) + "'";
    const std::string quoted_double = "\"" + std::string(key) + "\"";
    std::size_t pos = text_.find(quoted_single);
    std::size_t len = quoted_single.size();
    if (pos == std::string_view::npos) {
      pos = text_.find(quoted_double);
      len = quoted_double.size();
    }
    if (pos == std::string_view::npos) {
      return std::nullopt;
    }
    pos = text_.find(':', pos + len);
    if (pos == std::string_view::npos) {
      return std::nullopt;
    }
    ++pos;
    while (pos < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos]))) {
      ++pos;
    }
    std::size_t end = pos;
    if (end < text_.size() && text_[end] == '(') {
      end = text_.find(')', end);
      if (end == std::string_view::npos) {
        throw FormatError("npy: unterminated shape tuple");
      }
      return text_.substr(pos, end - pos + 1);
    }
    if (end < text_.size() && (text_[end] == '\'' || text_[end] == '"')) {
      const char quote = text_[end];
      end = text_.find(quote, end + 1);
      if (end == std::string_view::npos) {
        throw FormatError("npy: unterminated string in header");
      }
      return text_.substr(pos + 1, end - pos - 1);
    }
    while (end < text_.size() && text_[end] != ',' && text_[end] != '}') {
      ++end;
    }
    std::string_view value = text_.substr(pos, end - pos);
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) {
      value.remove_suffix(1);
    }
    return value;
  }

 private:
  std::string_view text_;
};

std::vector<std::size_t> parse_shape(std::string_view tuple) {
  std::vector<std::size_t> shape;
  std::size_t i = 1;  // skip '('
  while (i < tuple.size()) {
    const char c = tuple[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t value = 0;
      while (i < tuple.size() && std::isdigit(static_cast<unsigned char>(tuple[i]))) {
        value = value * 10 + static_cast<std::size_t>(tuple[i] - '0');
        ++i;
      }
      shape.push_back(value);
    } else if (c == ',' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      throw FormatError("npy: malformed shape " + std::string(tuple));
    }
  }
  return shape;
}

}  // namespace

std::string encode_npy(const LatentTensor& tensor, NpyDtype dtype) {
  const TensorDims& dims = tensor.dims();
  std::ostringstream dict;
  dict << "{'descr': '" << (dtype == NpyDtype::Float64 ? "<f8" : "<f4")
       << "', 'fortran_order': False, 'shape': (" << dims.channels << ", "
       << dims.height << ", " << dims.width << "), }";
  std::string header = dict.str();
  const std::size_t unpadded = kPreambleSize + header.size() + 1;
  header.append((kAlignment - unpadded % kAlignment) % kAlignment, ' ');
  header.push_back('\n');
  if (header.size() > 0xffff) {
    throw FormatError("npy: header too long for format version 1.0");
  }

  std::string out;
  const std::size_t item = dtype == NpyDtype::Float64 ? 8 : 4;
  out.reserve(kPreambleSize + header.size() + item * tensor.size());
  out.append(kMagic);
  out.push_back('\x01');
  out.push_back('\x00');
  store_le(static_cast<std::uint16_t>(header.size()), out);
  out.append(header);
  for (double x : tensor.data()) {
    if (dtype == NpyDtype::Float64) {
      store_le(x, out);
    } else {
      store_le(static_cast<float>(x), out);
    }
  }
  return out;
}

LatentTensor decode_npy(std::string_view bytes) {
  if (bytes.size() < kPreambleSize || bytes.substr(0, kMagic.size()) != kMagic) {
    throw FormatError("npy: bad magic (not an NPY file)");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw FormatError("npy: unsupported format version " + std::to_string(major) +
                      "." + std::to_string(minor) + " (expected 1.0)");
  }
  const std::size_t header_len = load_le<std::uint16_t>(bytes.data() + 8);
  if (bytes.size() < kPreambleSize + header_len) {
    throw FormatError("npy: truncated header");
  }
  const HeaderParser header(bytes.substr(kPreambleSize, header_len));

  const auto descr = header.raw_value("descr");
  if (!descr) {
    throw FormatError("npy: header has no 'descr'");
  }
  std::size_t item = 0;
  if (*descr == "<f8") {
    item = 8;
  } else if (*descr == "<f4") {
    item = 4;
  } else {
    throw FormatError("npy: unsupported dtype '" + std::string(*descr) +
                      "' (expected '<f4' or '<f8')");
  }

  const auto fortran = header.raw_value("fortran_order");
  if (!fortran) {
    throw FormatError("npy: header has no 'fortran_order'");
  }
  if (*fortran != "False") {
    throw FormatError("npy: Fortran-ordered arrays are not supported");
  }

  const auto shape_text = header.raw_value("shape");
  if (!shape_text || shape_text->empty() || shape_text->front() != '(') {
    throw FormatError("npy: header has no shape tuple");
  }
  const std::vector<std::size_t> shape = parse_shape(*shape_text);
  if (shape.size() != 3) {
    throw FormatError("npy: expected a rank-3 (c, h, w) array, got rank " +
                      std::to_string(shape.size()));
  }
  const TensorDims dims{shape[0], shape[1], shape[2]};

  const std::string_view payload = bytes.substr(kPreambleSize + header_len);
  if (payload.size() != dims.volume() * item) {
    throw FormatError("npy: payload holds " + std::to_string(payload.size()) +
                      " bytes, shape " + dims.to_string() + " needs " +
                      std::to_string(dims.volume() * item));
  }
  std::vector<double> data(dims.volume());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char* p = payload.data() + i * item;
    data[i] = item == 8 ? load_le<double>(p)
                        : static_cast<double>(load_le<float>(p));
  }
  return LatentTensor(dims, std::move(data));
}

LatentTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open tensor file " + path.string());
  }
  const std::string bytes{std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>()};
  try {
    return decode_npy(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_tensor(const LatentTensor& tensor, const std::filesystem::path& path,
                  NpyDtype dtype) {
  const std::string bytes = encode_npy(tensor, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace cluemark
