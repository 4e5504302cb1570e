// Copyright 2026 The tfsep Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "tfsep/error.hpp"
#include "tfsep/wav.hpp"

using namespace tfsep;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("tfsep_wav_" + name);
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void put16(std::vector<unsigned char>& b, unsigned v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
}

void put32(std::vector<unsigned char>& b, unsigned v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
}

// Hand-assembled stereo file with an extra chunk before "data".
std::vector<unsigned char> stereo_file() {
  std::vector<unsigned char> b{'R', 'I', 'F', 'F'};
  put32(b, 0);
  for (char c : std::string("WAVEfmt ")) b.push_back(static_cast<unsigned char>(c));
  put32(b, 16);
  put16(b, 1);
  put16(b, 2);
  put32(b, 8000);
  put32(b, 8000 * 4);
  put16(b, 4);
  put16(b, 16);
  for (char c : std::string("LIST")) b.push_back(static_cast<unsigned char>(c));
  put32(b, 3);
  b.insert(b.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  for (char c : std::string("data")) b.push_back(static_cast<unsigned char>(c));
  put32(b, 8);
  put16(b, 16384);
  put16(b, 0);
  put16(b, 0x8000);  // -32768
  put16(b, 0x8000);
  return b;
}

}  // namespace

TEST_CASE("wav round trip") {
  const auto path = temp_path("rt.wav");
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::round(std::sin(0.01 * i) * 20000) / 32768.0;
  save_wav(Signal{x, 22050}, path);
  const auto y = load_wav(path);
  CHECK(y.rate == 22050);
  CHECK(y.samples == x);
  CHECK(fs::file_size(path) == 44 + 2000);
  fs::remove(path);
}

TEST_CASE("wav writer clips and rounds") {
  const auto path = temp_path("clip.wav");
  save_wav(Signal{{2.0, -2.0, 0.5 / 32768.0}, 8000}, path);
  const auto y = load_wav(path);
  CHECK(y.samples[0] == 32767.0 / 32768.0);
  CHECK(y.samples[1] == -1.0);
  CHECK(std::abs(y.samples[2] * 32768.0) == 1.0);
  fs::remove(path);
}

TEST_CASE("wav reader down-mixes channels and skips unknown chunks") {
  const auto path = temp_path("stereo.wav");
  write_bytes(path, stereo_file());
  const auto s = load_wav(path);
  CHECK(s.rate == 8000);
  REQUIRE(s.size() == 2);
  CHECK(s.samples[0] == 0.25);
  CHECK(s.samples[1] == -1.0);
  fs::remove(path);
}

TEST_CASE("wav reader rejects malformed files") {
  const auto path = temp_path("bad.wav");
  const auto good = stereo_file();

  write_bytes(path, std::vector<unsigned char>(good.begin(), good.begin() + 20));
  CHECK_THROWS_AS(load_wav(path), DataError);

  write_bytes(path, {'n', 'o', 'p', 'e'});
  CHECK_THROWS_AS(load_wav(path), DataError);

  auto float_fmt = good;
  float_fmt[20] = 3;  // IEEE float
  write_bytes(path, float_fmt);
  CHECK_THROWS_AS(load_wav(path), DataError);

  auto eight_bit = good;
  eight_bit[34] = 8;
  write_bytes(path, eight_bit);
  CHECK_THROWS_AS(load_wav(path), DataError);

  // Header only: fmt present, data chunk cut off.
  write_bytes(path, std::vector<unsigned char>(good.begin(), good.begin() + 36));
  CHECK_THROWS_AS(load_wav(path), DataError);

  fs::remove(path);
  CHECK_THROWS_AS(load_wav(temp_path("missing.wav")), IoError);
}

TEST_CASE("corpus recordings decode") {
  const auto s = load_wav(std::string(TFSEP_TEST_DATA_DIR) + "/corpus/librivox/01.wav");
  CHECK(s.rate == 16000);
  CHECK(s.size() > 16000);
  double peak = 0.0;
  for (double v : s.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak > 0.05);
  CHECK(peak <= 1.0);
}
