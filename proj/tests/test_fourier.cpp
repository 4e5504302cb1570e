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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "tfsep/error.hpp"
#include "tfsep/fourier.hpp"

using namespace tfsep;
using tfsep::testing::random_signal;
using tfsep::testing::relative_error;

namespace {

using LComplex = std::complex<long double>;

std::vector<LComplex> brute_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<LComplex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    LComplex acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * 3.141592653589793238462643383279L *
                              static_cast<long double>((k * t) % n) / n;
      acc += LComplex(x[t].real(), x[t].imag()) * LComplex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<Complex> random_complex(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

std::vector<unsigned char> pgm_pixels(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string magic;
  std::size_t w = 0;
  std::size_t h = 0;
  int maxval = 0;
  in >> magic >> w >> h >> maxval;
  in.get();
  std::vector<unsigned char> px(w * h);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  return px;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tfsep_test_" + name);
}

}  // namespace

TEST_CASE("power-of-two helpers") {
  CHECK(is_power_of_two(1));
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(0));
  CHECK_FALSE(is_power_of_two(800));
  CHECK(next_power_of_two(800) == 1024);
  CHECK(next_power_of_two(512) == 512);
}

TEST_CASE("fft: closed-form spectra") {
  const auto impulse = fft(std::vector<Complex>{1, 0, 0, 0});
  for (const auto& z : impulse) CHECK(std::abs(z - Complex{1, 0}) < 1e-15);

  const auto dc = fft(std::vector<Complex>(16, Complex{0.75, 0}));
  CHECK(std::abs(dc[0] - Complex{12, 0}) < 1e-12);
  for (std::size_t k = 1; k < 16; ++k) CHECK(std::abs(dc[k]) < 1e-12);

  std::vector<Complex> alt(8);
  for (std::size_t t = 0; t < 8; ++t) alt[t] = (t % 2 == 0) ? 1.0 : -1.0;
  const auto a = fft(alt);
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(a[k]) == doctest::Approx(k == 4 ? 8.0 : 0.0));

  CHECK_THROWS_AS(fft(std::vector<Complex>(6)), InvalidArgument);
}

TEST_CASE("fft matches a brute-force DFT and ifft inverts it") {
  for (std::size_t n = 2; n <= 1024; n *= 2) {
    const auto x = random_complex(n, n);
    const auto got = fft(x);
    const auto want = brute_dft(x);
    long double worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(LComplex(got[k].real(), got[k].imag()) - want[k]));
    }
    CHECK(worst <= 1e-9L);
    const auto back = ifft(got);
    for (std::size_t t = 0; t < n; ++t) CHECK(std::abs(back[t] - x[t]) < 1e-12);
  }
}

TEST_CASE("windows") {
  const auto hann = make_window(WindowKind::Hann, 4);
  CHECK(hann[0] == doctest::Approx(0.0));
  CHECK(hann[1] == doctest::Approx(0.5));
  CHECK(hann[2] == doctest::Approx(1.0));
  CHECK(hann[3] == doctest::Approx(0.5));
  const auto h512 = make_window(WindowKind::Hann, 512);
  CHECK(h512[256] == doctest::Approx(1.0));
  for (double v : make_window(WindowKind::Rectangular, 7)) CHECK(v == 1.0);
  CHECK_THROWS_AS(make_window(WindowKind::Hann, 1), InvalidArgument);
  CHECK(parse_window_kind("hann") == WindowKind::Hann);
  CHECK(parse_window_kind("rect") == WindowKind::Rectangular);
  CHECK_THROWS_AS(parse_window_kind("hamming"), InvalidArgument);
}

TEST_CASE("StftConfig") {
  const auto c = StftConfig::from_ms(WindowKind::Hann, 32, 0.5, 16000);
  CHECK(c.win_size == 512);
  CHECK(c.hop == 256);
  CHECK(c.fft_size == 512);
  const auto d = StftConfig::from_ms(WindowKind::Hann, 50, 0.5, 16000);
  CHECK(d.win_size == 800);
  CHECK(d.hop == 400);
  CHECK(d.fft_size == 1024);
  const auto e = StftConfig::from_ms(WindowKind::Rectangular, 5, 0.25, 16000);
  CHECK(e.win_size == 80);
  CHECK(e.hop == 20);
  CHECK_THROWS_AS((StftConfig{WindowKind::Hann, 512, 0, 512}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StftConfig{WindowKind::Hann, 512, 256, 500}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StftConfig{WindowKind::Hann, 512, 600, 512}.validate()), InvalidArgument);
}

TEST_CASE("stft shape for a long recording") {
  const StftConfig cfg{WindowKind::Hann, 512, 256, 512};
  CHECK(stft_frame_count(959669, cfg) == 3750);
  const auto m = stft(random_signal(5000, 1), cfg);
  CHECK(m.coeffs.rows() == 257);
  CHECK(m.coeffs.cols() == stft_frame_count(5000, cfg));
}

TEST_CASE("stft_frequencies") {
  const auto f = stft_frequencies(512, 16000);
  REQUIRE(f.size() == 257);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(f[k] == 31.25 * static_cast<double>(k));
  CHECK(f.back() == 8000.0);
  const auto g = stft_frequencies(128, 4000);
  REQUIRE(g.size() == 65);
  CHECK(g[0] == 0.0);
  CHECK(g[1] - g[0] == 31.25);
  CHECK(g.back() == 2000.0);
}

TEST_CASE("stft of an on-bin sinusoid with a rectangular window") {
  // Bin 8 of a 64-point frame; every frame sees whole periods.
  const int rate = 6400;
  const StftConfig cfg{WindowKind::Rectangular, 64, 64, 64};
  const Signal s{tfsep::testing::sine(1024, 800.0, rate), rate};
  const auto m = stft(s, cfg);
  // Edge frames include zero padding; check the interior ones.
  for (std::size_t t = 1; t + 1 < m.coeffs.cols(); ++t) {
    double total = 0.0;
    for (std::size_t k = 0; k < m.coeffs.rows(); ++k) total += std::norm(m.coeffs(k, t));
    CHECK(std::norm(m.coeffs(8, t)) / total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stft frame-level Parseval") {
  const StftConfig cfg{WindowKind::Hann, 256, 128, 256};
  const auto s = random_signal(2048, 2);
  const auto m = stft(s, cfg);
  const auto w = make_window(WindowKind::Hann, 256);
  // Frame t covers original samples t*hop - win/2 ...
  for (std::size_t t = 2; t < 6; ++t) {
    double time_energy = 0.0;
    for (std::size_t n = 0; n < 256; ++n) {
      const double v = w[n] * s.samples[t * 128 - 128 + n];
      time_energy += v * v;
    }
    double freq_energy = 0.0;
    for (std::size_t k = 0; k < m.coeffs.rows(); ++k) {
      const double weight = (k == 0 || k == 128) ? 1.0 : 2.0;
      freq_energy += weight * std::norm(m.coeffs(k, t));
    }
    CHECK(freq_energy / 256.0 == doctest::Approx(time_energy).epsilon(1e-9));
  }
}

TEST_CASE("stft is linear") {
  const StftConfig cfg{WindowKind::Hann, 400, 100, 512};
  const auto x = random_signal(3000, 3);
  const auto y = random_signal(3000, 4);
  Signal z{std::vector<double>(3000), 16000};
  for (std::size_t i = 0; i < 3000; ++i) z.samples[i] = 2.0 * x.samples[i] - 3.0 * y.samples[i];
  const auto mx = stft(x, cfg);
  const auto my = stft(y, cfg);
  const auto mz = stft(z, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < mz.coeffs.size(); ++i) {
    worst = std::max(worst, std::abs(mz.coeffs.data()[i] -
                                     (2.0 * mx.coeffs.data()[i] - 3.0 * my.coeffs.data()[i])));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("istft round trips") {
  const auto s = random_signal(7919, 5);
  for (const StftConfig& cfg : {StftConfig{WindowKind::Hann, 512, 256, 512},
                                StftConfig{WindowKind::Hann, 512, 128, 512},
                                StftConfig{WindowKind::Hann, 800, 600, 1024},
                                StftConfig{WindowKind::Rectangular, 256, 256, 256}}) {
    const auto back = istft(stft(s, cfg));
    REQUIRE(back.size() == s.size());
    CHECK(back.rate == s.rate);
    CHECK(relative_error(s.samples, back.samples) < 1e-6);
  }
  // Non-overlapping rectangular frames tile the signal.
  const auto rect = istft(stft(s, StftConfig{WindowKind::Rectangular, 128, 128, 128}));
  CHECK(tfsep::testing::max_abs_diff(s.samples, rect.samples) < 1e-14);
}

TEST_CASE("istft rejects a configuration whose window overlap vanishes") {
  auto m = stft(random_signal(4000, 6), StftConfig{WindowKind::Hann, 256, 256, 256});
  CHECK_THROWS_AS(istft(m), InvalidArgument);
}

TEST_CASE("stft of signals shorter than the window") {
  // Centre padding still yields whole frames; only an empty signal is rejected.
  const StftConfig cfg{WindowKind::Hann, 512, 256, 512};
  const auto s = random_signal(100, 7);
  const auto m = stft(s, cfg);
  CHECK(m.coeffs.cols() == 2);
  CHECK(relative_error(s.samples, istft(m).samples) < 1e-6);
  CHECK_THROWS_AS(stft(Signal{{}, 16000}, cfg), InvalidArgument);
}

TEST_CASE("heat map export") {
  const auto pgm = temp_path("heat.pgm");
  const auto csv = temp_path("heat.csv");
  Matrix<double> m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  export_heatmap(m, pgm, csv);
  // Row 0 is the lowest band, so it is written last (bottom of the image).
  CHECK(pgm_pixels(pgm) == std::vector<unsigned char>{255, 0, 0, 255});
  CHECK(read_csv(csv) == m);

  Matrix<double> zeros(3, 4);
  write_pgm(zeros, pgm);
  for (auto v : pgm_pixels(pgm)) CHECK(v == 0);

  Matrix<double> r(3, 5);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = std::sin(1.7 * i) * 1e3;
  write_csv(r, csv);
  const auto back = read_csv(csv);
  REQUIRE(back.rows() == 3);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(back.data()[i] - r.data()[i]) < 1e-9);

  std::filesystem::remove(pgm);
  std::filesystem::remove(csv);
  CHECK_THROWS_AS(write_pgm(m, "/nonexistent-dir/x.pgm"), IoError);
}
