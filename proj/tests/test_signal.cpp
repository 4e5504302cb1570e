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
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "tfsep/error.hpp"
#include "tfsep/signal.hpp"

using namespace tfsep;
using tfsep::testing::random_vector;

namespace {

using Vec = std::vector<double>;

void check_close(const Vec& a, const Vec& b, double tol = 1e-12) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

// Index of the largest |X[k]|, k <= n/2, by direct DFT summation.
std::size_t dft_peak_bin(const Vec& x) {
  const std::size_t n = x.size();
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * M_PI * k * t / n;
      acc += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    if (std::abs(acc) > best_mag) {
      best_mag = static_cast<double>(std::abs(acc));
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("make_signal validates its input") {
  CHECK(make_signal({0.1, -0.2}, 8000).size() == 2);
  CHECK_THROWS_AS(make_signal({0.1}, 0), InvalidArgument);
  CHECK_THROWS_AS(make_signal({std::nan("")}, 8000), InvalidArgument);
  CHECK_THROWS_AS(make_signal({std::numeric_limits<double>::infinity()}, 8000),
                  InvalidArgument);
  CHECK(Signal{Vec(16000), 16000}.duration() == doctest::Approx(1.0));
}

TEST_CASE("convolve: hand-computed values") {
  check_close(convolve(Vec{1, 0, 0}, Vec{1, 2}), Vec{1, 2, 0, 0});
  check_close(convolve(Vec{1, 2, 3}, Vec{1, 1}), Vec{1, 3, 5, 3});
  const Vec h{0.5, -1.25, 3.0};
  check_close(convolve(Vec{1}, h), h);
  // Same mode keeps |x| samples of the full result, centred.
  check_close(convolve(Vec{1, 2, 3}, Vec{1, 1, 1}, ConvolveMode::Same), Vec{3, 6, 5});
  CHECK_THROWS_AS(convolve(Vec{}, h), InvalidArgument);
}

TEST_CASE("convolve is commutative and linear") {
  const auto x = random_vector(37, 1);
  const auto y = random_vector(37, 2);
  const auto h = random_vector(9, 3);
  check_close(convolve(x, h), convolve(h, x), 1e-12);
  Vec combo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) combo[i] = 2.5 * x[i] - 0.75 * y[i];
  const auto lhs = convolve(combo, h);
  const auto cx = convolve(x, h);
  const auto cy = convolve(y, h);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    CHECK(std::abs(lhs[i] - (2.5 * cx[i] - 0.75 * cy[i])) < 1e-12);
  }
}

TEST_CASE("downsample2 and upsample2") {
  CHECK(downsample2(Vec{1, 2, 3, 4}) == Vec{1, 3});
  CHECK(downsample2(Vec{5}) == Vec{5});
  CHECK(downsample2(Vec{1, 2, 3}) == Vec{1, 3});
  CHECK(upsample2(Vec{1, 3}) == Vec{1, 0, 3, 0});
  CHECK(upsample2(Vec{}).empty());

  const auto x = random_vector(17, 4);
  CHECK(downsample2(upsample2(x)) == x);
  const auto z = upsample2(downsample2(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(z[i] == (i % 2 == 0 ? x[i] : 0.0));
  }
}

TEST_CASE("pad modes") {
  CHECK(pad(Vec{1, 2}, 4, PadMode::Zero) == Vec{1, 2, 0, 0});
  CHECK(pad(Vec{1, 2}, 4, PadMode::Periodic) == Vec{1, 2, 1, 2});
  CHECK(pad(Vec{1, 2, 3}, 5, PadMode::Symmetric) == Vec{1, 2, 3, 3, 2});
  CHECK(pad(Vec{1, 2, 3}, 3, PadMode::Zero) == Vec{1, 2, 3});
  CHECK_THROWS_AS(pad(Vec{1, 2, 3}, 2, PadMode::Zero), InvalidArgument);

  const auto x = random_vector(7, 5);
  for (auto mode : {PadMode::Zero, PadMode::Periodic, PadMode::Symmetric}) {
    const auto y = pad(x, 23, mode);
    REQUIRE(y.size() == 23);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == x[i]);
  }
}

TEST_CASE("extension_index") {
  CHECK(extension_index(-1, 4, PadMode::Periodic) == 3);
  CHECK(extension_index(5, 4, PadMode::Periodic) == 1);
  CHECK(extension_index(-1, 4, PadMode::Symmetric) == 0);
  CHECK(extension_index(-2, 4, PadMode::Symmetric) == 1);
  CHECK(extension_index(4, 4, PadMode::Symmetric) == 3);
  CHECK(extension_index(9, 4, PadMode::Symmetric) == 1);
}

TEST_CASE("pad mode names") {
  CHECK(parse_pad_mode("periodization") == PadMode::Periodic);
  CHECK(parse_pad_mode("per") == PadMode::Periodic);
  CHECK(parse_pad_mode("zero") == PadMode::Zero);
  CHECK(parse_pad_mode("symmetric") == PadMode::Symmetric);
  CHECK(parse_pad_mode(to_string(PadMode::Symmetric)) == PadMode::Symmetric);
  CHECK_THROWS_AS(parse_pad_mode("reflect"), InvalidArgument);
}

TEST_CASE("dot and l2_norm") {
  CHECK(l2_norm(Vec{3, 4}) == 5.0);
  CHECK(dot(Vec{1, 0}, Vec{0, 1}) == 0.0);
  const auto x = random_vector(11, 6);
  CHECK(l2_norm(x) * l2_norm(x) == doctest::Approx(dot(x, x)).epsilon(1e-14));
  CHECK_THROWS_AS(dot(Vec{1, 2}, Vec{1}), InvalidArgument);
}

TEST_CASE("resample") {
  const auto x = random_vector(100, 7);
  const auto same = resample(Signal{x, 10000}, 10000);
  CHECK(same.samples == x);
  CHECK(same.rate == 10000);

  for (int to : {8000, 10000, 22050, 44100}) {
    const auto r = resample(Signal{Vec(800, 0.25), 16000}, to);
    CHECK(r.rate == to);
    for (double v : r.samples) CHECK(std::abs(v - 0.25) < 1e-6);
  }

  // 0.5 s of 440 Hz: 16 kHz -> 10 kHz. Bin width is 2 Hz, so the peak must
  // be at bin 220 +/- 1.
  const auto tone = tfsep::testing::sine(8000, 440.0, 16000);
  const auto down = resample(Signal{tone, 16000}, 10000);
  CHECK(down.size() == 5000);
  const auto peak = dft_peak_bin(down.samples);
  CHECK(peak >= 219);
  CHECK(peak <= 221);

  CHECK_THROWS_AS(resample(Signal{x, 16000}, 0), InvalidArgument);
}
