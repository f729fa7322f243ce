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
#include <cstring>
#include <filesystem>
#include <regex>
#include <string>

#include "cluemark/error.hpp"
#include "cluemark/key_io.hpp"
#include "cluemark/npy.hpp"
#include "cluemark/watermark.hpp"

namespace cluemark {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("cluemark_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Byte layout produced by numpy.save for a float32 (1, 2, 2) array.
std::string numpy_fixture() {
  std::string header =
      "{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2, 2), }";
  header.append(117 - header.size(), ' ');
  header.push_back('\n');
  std::string bytes("\x93NUMPY\x01\x00\x76\x00", 10);
  bytes += header;
  const unsigned char payload[] = {0x00, 0x00, 0xc0, 0x3f, 0x00, 0x00, 0x00, 0xc0,
                                   0x00, 0x00, 0x80, 0x3e, 0x00, 0x00, 0x40, 0x40};
  bytes.append(reinterpret_cast<const char*>(payload), sizeof(payload));
  return bytes;
}

TEST(Npy, DecodesNumpyWrittenFile) {
  const LatentTensor t = decode_npy(numpy_fixture());
  EXPECT_EQ(t.dims(), (TensorDims{1, 2, 2}));
  EXPECT_EQ(t(0, 0, 0), 1.5);
  EXPECT_EQ(t(0, 0, 1), -2.0);
  EXPECT_EQ(t(0, 1, 0), 0.25);
  EXPECT_EQ(t(0, 1, 1), 3.0);
}

TEST(Npy, HeaderLayout) {
  const std::string bytes = encode_npy(LatentTensor({4, 64, 64}));
  ASSERT_GE(bytes.size(), 10u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("\x93NUMPY\x01\x00", 8));
  const std::size_t header_len =
      static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
  EXPECT_EQ((10 + header_len) % 64, 0u);
  const std::string header = bytes.substr(10, header_len);
  EXPECT_EQ(header.back(), '\n');
  EXPECT_NE(header.find("'descr': '<f8'"), std::string::npos);
  EXPECT_NE(header.find("'fortran_order': False"), std::string::npos);
  EXPECT_NE(header.find("'shape': (4, 64, 64)"), std::string::npos);
  EXPECT_EQ(bytes.size(), 10 + header_len + 4 * 64 * 64 * sizeof(double));
}

TEST(Npy, Float64RoundTripIsBitExact) {
  RandomStream rng(1);
  const LatentTensor t = LatentTensor::standard_normal({4, 64, 64}, rng);
  const LatentTensor back = decode_npy(encode_npy(t));
  ASSERT_EQ(back.dims(), t.dims());
  EXPECT_EQ(std::memcmp(back.data().data(), t.data().data(),
                        t.size() * sizeof(double)),
            0);
}

TEST(Npy, Float32RoundTripWithinSinglePrecision) {
  RandomStream rng(2);
  const LatentTensor t = LatentTensor::standard_normal({2, 8, 8}, rng);
  const std::string bytes = encode_npy(t, NpyDtype::Float32);
  EXPECT_NE(bytes.find("'<f4'"), std::string::npos);
  const LatentTensor back = decode_npy(bytes);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(std::abs(back.data()[i] - t.data()[i]),
              std::ldexp(std::abs(t.data()[i]), -23));
  }
}

TEST(Npy, RejectsMalformedInput) {
  std::string bad_magic = numpy_fixture();
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_npy(bad_magic), FormatError);

  std::string v2 = numpy_fixture();
  v2[6] = 2;
  EXPECT_THROW(decode_npy(v2), FormatError);

  std::string big_endian = numpy_fixture();
  big_endian.replace(big_endian.find("<f4"), 3, ">f4");
  EXPECT_THROW(decode_npy(big_endian), FormatError);

  std::string fortran = numpy_fixture();
  fortran.replace(fortran.find("False"), 5, "True ");
  EXPECT_THROW(decode_npy(fortran), FormatError);

  std::string rank2 = numpy_fixture();
  rank2.replace(rank2.find("(1, 2, 2)"), 9, "(2, 2)   ");
  EXPECT_THROW(decode_npy(rank2), FormatError);

  std::string truncated = numpy_fixture();
  truncated.pop_back();
  EXPECT_THROW(decode_npy(truncated), FormatError);

  EXPECT_THROW(decode_npy("\x93NUM"), FormatError);
}

TEST(Npy, FileRoundTrip) {
  TempDir dir;
  RandomStream rng(3);
  const LatentTensor t = LatentTensor::standard_normal({4, 8, 8}, rng);
  write_tensor(t, dir.path() / "x.npy");
  EXPECT_EQ(read_tensor(dir.path() / "x.npy"), t);
  EXPECT_THROW(read_tensor(dir.path() / "missing.npy"), std::runtime_error);
}

KeyFile default_key(std::uint64_t seed) {
  RandomStream rng(seed);
  return {setup(rng, {32, 2.0, 0.001}, {2, 4, 4}, {4, 64, 64}), 0.01};
}

TEST(KeyFile, RoundTripIsExact) {
  const KeyFile key = default_key(7);
  const std::string text = format_key(key);
  EXPECT_EQ(text.rfind("# cluemark secret key\n", 0), 0u);
  EXPECT_EQ(parse_key(text), key);
}

TEST(KeyFile, ReloadedKeyGivesIdenticalDetection) {
  TempDir dir;
  const KeyFile key = default_key(8);
  write_key(key, dir.path() / "k.key");
  const KeyFile loaded = read_key(dir.path() / "k.key");
  RandomStream rng(9);
  const LatentTensor marked =
      mark_latent(LatentTensor::standard_normal({4, 64, 64}, rng), key.key, rng);
  const DetectionReport a = extract_latent(marked, key.key);
  const DetectionReport b = extract_latent(marked, loaded.key);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.log_p_value, b.log_p_value);
  EXPECT_EQ(a.decision, b.decision);
}

std::string replace_line(std::string text, const std::string& field,
                         const std::string& replacement) {
  const std::regex line("(^|\\n)" + field + " = [^\\n]*");
  return std::regex_replace(text, line, "$1" + replacement,
                            std::regex_constants::format_first_only);
}

TEST(KeyFile, RejectsBadFields) {
  const std::string text = format_key(default_key(10));
  EXPECT_THROW(parse_key(replace_line(text, "gamma", "gamma = 0")), FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "gamma", "gamma = -2")), FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "beta", "beta = abc")), FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "threshold", "threshold = 1.5")),
               FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "block_shape", "block_shape = 3 4 4")),
               FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "format_version", "format_version = 2")),
               FormatError);
  EXPECT_THROW(parse_key(text + "colour = blue\n"), FormatError);
  EXPECT_THROW(parse_key(text + "gamma = 2\n"), FormatError);
  EXPECT_THROW(parse_key(replace_line(text, "beta", "")), FormatError);
  EXPECT_THROW(parse_key(text + "not a field line\n"), FormatError);
}

TEST(KeyFile, RejectsNonUnitDirection) {
  KeyFile key = default_key(11);
  std::string direction = "direction =";
  for (double x : key.key.direction.values()) {
    direction += ' ' + std::to_string(1.1 * x);
  }
  EXPECT_THROW(parse_key(replace_line(format_key(key), "direction", direction)),
               FormatError);
}

TEST(KeyFile, RejectsDirectionOfWrongLength) {
  const KeyFile key = default_key(12);
  EXPECT_THROW(parse_key(replace_line(format_key(key), "direction",
                                      "direction = 0.6 0.8")),
               FormatError);
}

}  // namespace
}  // namespace cluemark
