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

#include "cluemark/key_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <vector>

#include "cluemark/error.hpp"

namespace cluemark {

namespace {

constexpr std::array<std::string_view, 7> kFields = {
    "format_version", "gamma",     "beta",     "block_shape",
    "latent_dims",    "threshold", "direction"};

std::string format_real(double x) {
  std::array<char, 64> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) {
    throw FormatError("key: cannot format value");
  }
  return std::string(buf.data(), end);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) {
      break;
    }
    auto stop = s.find_first_of(" \t", start);
    if (stop == std::string_view::npos) {
      stop = s.size();
    }
    words.push_back(s.substr(start, stop - start));
    pos = stop;
  }
  return words;
}

template <typename T>
T parse_number(std::string_view field, std::string_view word) {
  T value{};
  const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || end != word.data() + word.size()) {
    throw FormatError("key: field '" + std::string(field) + "' has bad value '" +
                      std::string(word) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view field, std::string_view value) {
  std::vector<T> out;
  for (std::string_view word : split_words(value)) {
    out.push_back(parse_number<T>(field, word));
  }
  return out;
}

template <typename T>
T parse_scalar(std::string_view field, std::string_view value) {
  const auto list = parse_list<T>(field, value);
  if (list.size() != 1) {
    throw FormatError("key: field '" + std::string(field) + "' expects one value");
  }
  return list.front();
}

std::array<std::size_t, 3> parse_triple(std::string_view field,
                                        std::string_view value) {
  const auto list = parse_list<std::size_t>(field, value);
  if (list.size() != 3) {
    throw FormatError("key: field '" + std::string(field) +
                      "' expects three integers");
  }
  return {list[0], list[1], list[2]};
}

}  // namespace

std::string format_key(const KeyFile& key_file) {
  const SecretKey& key = key_file.key;
  std::ostringstream out;
  out << "# cluemark secret key\n";
  out << "format_version = " << key.format_version << '\n';
  out << "gamma = " << format_real(key.params.gamma) << '\n';
  out << "beta = " << format_real(key.params.beta) << '\n';
  out << "block_shape = " << key.block_shape.channels << ' '
      << key.block_shape.height << ' ' << key.block_shape.width << '\n';
  out << "latent_dims = " << key.latent_dims.channels << ' '
      << key.latent_dims.height << ' ' << key.latent_dims.width << '\n';
  out << "threshold = " << format_real(key_file.threshold) << '\n';
  out << "direction =";
  for (double x : key.direction.values()) {
    out << ' ' << format_real(x);
  }
  out << '\n';
  return out.str();
}

KeyFile parse_key(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line =
        trim(text.substr(0, eol == std::string_view::npos ? text.size() : eol));
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("key: line " + std::to_string(line_no) +
                        " is not 'name = value'");
    }
    const std::string name(trim(line.substr(0, eq)));
    if (std::find(kFields.begin(), kFields.end(), name) == kFields.end()) {
      throw FormatError("key: unknown field '" + name + "'");
    }
    if (!fields.emplace(name, std::string(trim(line.substr(eq + 1)))).second) {
      throw FormatError("key: duplicate field '" + name + "'");
    }
  }
  for (std::string_view field : kFields) {
    if (!fields.contains(field)) {
      throw FormatError("key: missing field '" + std::string(field) + "'");
    }
  }

  try {
    const auto version = parse_scalar<int>("format_version", fields["format_version"]);
    const auto gamma = parse_scalar<double>("gamma", fields["gamma"]);
    const auto beta = parse_scalar<double>("beta", fields["beta"]);
    const auto block = parse_triple("block_shape", fields["block_shape"]);
    const auto dims = parse_triple("latent_dims", fields["latent_dims"]);
    const auto threshold = parse_scalar<double>("threshold", fields["threshold"]);
    auto direction = parse_list<double>("direction", fields["direction"]);

    if (!(threshold >= 0.0 && threshold <= 1.0)) {
      throw FormatError("key: threshold must lie in [0, 1]");
    }
    const BlockShape block_shape{block[0], block[1], block[2]};
    KeyFile key_file{
        SecretKey{SecretDirection::from_unit(std::move(direction), 1e-9),
                  ClweParams{block_shape.volume(), gamma, beta}, block_shape,
                  TensorDims{dims[0], dims[1], dims[2]}, version},
        threshold};
    key_file.key.validate();
    return key_file;
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("key: ") + e.what());
  }
}

KeyFile read_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open key file " + path.string());
  }
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  try {
    return parse_key(text);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_key(const KeyFile& key_file, const std::filesystem::path& path) {
  key_file.key.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << format_key(key_file);
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace cluemark
