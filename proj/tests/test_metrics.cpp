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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "tfsep/error.hpp"
#include "tfsep/metrics.hpp"
#include "tfsep/wav.hpp"

using namespace tfsep;
using tfsep::testing::random_vector;

namespace {

using Vec = std::vector<double>;

const std::string kData = TFSEP_TEST_DATA_DIR;

Signal speech() { return load_wav(kData + "/corpus/arctic_a/01.wav"); }

Vec with_noise(const Vec& s, double snr_db, std::uint64_t seed) {
  auto n = random_vector(s.size(), seed);
  const double gain = l2_norm(s) / l2_norm(n) * std::pow(10.0, -snr_db / 20.0);
  Vec out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + gain * n[i];
  return out;
}

Vec scaled(const Vec& s, double a) {
  Vec out(s);
  for (auto& v : out) v *= a;
  return out;
}

}  // namespace

TEST_CASE("mse") {
  const auto s = random_vector(100, 1);
  CHECK(mse(s, s) == 0.0);
  const double a = 0.7;
  CHECK(mse(s, scaled(s, a)) ==
        doctest::Approx((1 - a) * (1 - a) * dot(s, s) / 100.0).epsilon(1e-12));
  CHECK(mse(Vec{1, 2}, Vec{0, 0}) == 2.5);
  CHECK_THROWS_AS(mse(Vec{1, 2}, Vec{1}), InvalidArgument);
}

TEST_CASE("snr") {
  const auto s = random_vector(256, 2);
  CHECK(snr(s, s) == std::numeric_limits<double>::infinity());
  CHECK(snr(s, scaled(s, 1.1)) == doctest::Approx(20.0).epsilon(1e-12));
  for (double a : {0.5, 0.9, 1.1, 2.0}) {
    CHECK(std::abs(snr(s, scaled(s, a)) - (-20.0 * std::log10(std::abs(1.0 - a)))) < 1e-9);
  }
  CHECK_THROWS_AS(snr(Vec{1, 2}, Vec{1}), InvalidArgument);
}

TEST_CASE("si_sdr") {
  CHECK(si_sdr(Vec{1, 0}, Vec{1, 1}) == doctest::Approx(0.0));
  // est = s + e with e orthogonal to s: SI-SDR = 10 log10(|s|^2 / |e|^2).
  CHECK(si_sdr(Vec{2, 0}, Vec{2, 1}) == doctest::Approx(10.0 * std::log10(4.0)));

  const auto s = random_vector(500, 3);
  const auto est = with_noise(s, 6.0, 4);
  const double base = si_sdr(s, est);
  for (double beta : {0.01, 0.5, 3.0, 1e4, -1.0, -7.5}) {
    CHECK(std::abs(si_sdr(s, scaled(est, beta)) - base) < 1e-9);
  }
  CHECK(si_sdr(s, s) == std::numeric_limits<double>::infinity());
  CHECK(si_sdr(Vec{1, 0}, Vec{0, 1}) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(si_sdr(Vec{0, 0}, Vec{1, 1}), DataError);
  CHECK_THROWS_AS(si_sdr(Vec{1, 2}, Vec{1}), InvalidArgument);
}

TEST_CASE("stoi of identical signals is one") {
  const auto s = speech();
  CHECK(std::abs(stoi(s.samples, s.samples, s.rate) - 1.0) < 1e-9);
}

TEST_CASE("stoi decreases with noise") {
  const auto s = speech();
  const double weak = stoi(s.samples, with_noise(s.samples, 20.0, 5), s.rate);
  const double strong = stoi(s.samples, with_noise(s.samples, 0.0, 6), s.rate);
  CHECK(strong < weak);
  CHECK(weak < 1.0);
  CHECK(strong >= 0.0);
}

TEST_CASE("stoi agrees with an independent implementation") {
  // Reference value from the pystoi package on the same 10 kHz pair (5 dB
  // SNR white noise). Band-edge rounding and window shape differ slightly.
  const auto clean = load_wav(kData + "/stoi/clean_10k.wav");
  const auto noisy = load_wav(kData + "/stoi/noisy_10k.wav");
  REQUIRE(clean.rate == 10000);
  CHECK(std::abs(stoi(clean.samples, noisy.samples, 10000) - 0.7748459990) < 0.01);
}

TEST_CASE("stoi rejects unusable input") {
  CHECK_THROWS_AS(stoi(Vec(3000, 0.0), Vec(3000, 0.1), 10000), DataError);
  const auto s = speech();
  const Vec shorter(s.samples.begin(), s.samples.begin() + 2000);
  CHECK_THROWS_AS(stoi(shorter, shorter, s.rate), DataError);
  CHECK_THROWS_AS(stoi(Vec{1, 2}, Vec{1}, 16000), InvalidArgument);
}
