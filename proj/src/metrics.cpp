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

#include "tfsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tfsep/error.hpp"
#include "tfsep/fourier.hpp"
#include "tfsep/matrix.hpp"

namespace tfsep {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b,
                         const char* what) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

double squared_error(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

double mse(std::span<const double> ref, std::span<const double> est) {
  require_same_length(ref, est, "mse");
  if (ref.empty()) throw InvalidArgument("mse: empty signals");
  return squared_error(ref, est) / static_cast<double>(ref.size());
}

double snr(std::span<const double> ref, std::span<const double> est) {
  require_same_length(ref, est, "snr");
  const double noise = squared_error(ref, est);
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(dot(ref, ref) / noise);
}

double si_sdr(std::span<const double> ref, std::span<const double> est) {
  require_same_length(ref, est, "si_sdr");
  const double ref_energy = dot(ref, ref);
  if (ref_energy == 0.0) throw DataError("si_sdr: reference signal is all zeros");
  const double alpha = dot(ref, est) / ref_energy;
  if (alpha == 0.0) return -std::numeric_limits<double>::infinity();
  double target = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = alpha * ref[i];
    target += t * t;
    const double r = t - est[i];
    residual += r * r;
  }
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(target / residual);
}

namespace {

constexpr int kStoiRate = 10000;
constexpr std::size_t kFrameLen = 256;
constexpr std::size_t kHop = 128;
constexpr std::size_t kFftSize = 512;
constexpr std::size_t kBands = 15;
constexpr double kLowestCenter = 150.0;
constexpr std::size_t kSegmentFrames = 30;  // 384 ms at 10 kHz
constexpr double kClipDb = -15.0;
constexpr double kDynamicRangeDb = 40.0;

// Drops frames whose clean energy is more than kDynamicRangeDb below the
// loudest clean frame, then overlap-adds the surviving windowed frames.
void remove_silent_frames(std::vector<double>& x, std::vector<double>& y,
                          const std::vector<double>& window) {
  if (x.size() < kFrameLen) {
    x.clear();
    y.clear();
    return;
  }
  const std::size_t frames = (x.size() - kFrameLen) / kHop + 1;
  std::vector<double> energy(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kFrameLen; ++n) {
      const double v = window[n] * x[f * kHop + n];
      acc += v * v;
    }
    energy[f] = 20.0 * std::log10(std::sqrt(acc) + std::numeric_limits<double>::epsilon());
  }
  const double loudest = *std::max_element(energy.begin(), energy.end());
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < frames; ++f) {
    if (energy[f] > loudest - kDynamicRangeDb) keep.push_back(f);
  }
  const std::size_t out_len = (keep.size() - 1) * kHop + kFrameLen;
  std::vector<double> xs(out_len, 0.0);
  std::vector<double> ys(out_len, 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t src = keep[k] * kHop;
    const std::size_t dst = k * kHop;
    for (std::size_t n = 0; n < kFrameLen; ++n) {
      xs[dst + n] += window[n] * x[src + n];
      ys[dst + n] += window[n] * y[src + n];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// Bin k belongs to band j when its frequency lies in [lo_j, hi_j), with band
// edges one sixth of an octave either side of 150 * 2^(j/3) Hz.
std::vector<std::size_t> third_octave_band_of_bins() {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> band(kFftSize / 2 + 1, none);
  for (std::size_t k = 0; k < band.size(); ++k) {
    const double f = static_cast<double>(k) * kStoiRate / kFftSize;
    for (std::size_t j = 0; j < kBands; ++j) {
      const double center = kLowestCenter * std::pow(2.0, j / 3.0);
      const double lo = center * std::pow(2.0, -1.0 / 6.0);
      const double hi = center * std::pow(2.0, 1.0 / 6.0);
      if (f >= lo && f < hi) band[k] = j;
    }
  }
  return band;
}

Matrix<double> band_envelopes(const std::vector<double>& x,
                              const std::vector<double>& window,
                              const std::vector<std::size_t>& band_of_bin) {
  const std::size_t frames = x.size() < kFrameLen ? 0 : (x.size() - kFrameLen) / kHop + 1;
  Matrix<double> env(kBands, frames);
  const FftPlan plan(kFftSize);
  std::vector<Complex> buf(kFftSize);
  for (std::size_t f = 0; f < frames; ++f) {
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t n = 0; n < kFrameLen; ++n) buf[n] = window[n] * x[f * kHop + n];
    plan.forward(buf);
    for (std::size_t k = 0; k < band_of_bin.size(); ++k) {
      if (band_of_bin[k] < kBands) env(band_of_bin[k], f) += std::norm(buf[k]);
    }
  }
  for (auto& v : env.data()) v = std::sqrt(v);
  return env;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    ab += da * db;
    aa += da * da;
    bb += db * db;
  }
  const double denom = std::sqrt(aa) * std::sqrt(bb);
  return denom > 0.0 ? ab / denom : 0.0;
}

}  // namespace

double stoi(std::span<const double> ref, std::span<const double> est, int rate) {
  require_same_length(ref, est, "stoi");
  if (rate <= 0) throw InvalidArgument("stoi: rate must be positive");
  auto x = resample(Signal{{ref.begin(), ref.end()}, rate}, kStoiRate).samples;
  auto y = resample(Signal{{est.begin(), est.end()}, rate}, kStoiRate).samples;
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    throw DataError("stoi: clean signal is silent");
  }

  const auto window = make_window(WindowKind::Hann, kFrameLen);
  remove_silent_frames(x, y, window);
  const auto band_of_bin = third_octave_band_of_bins();
  const auto xe = band_envelopes(x, window, band_of_bin);
  const auto ye = band_envelopes(y, window, band_of_bin);
  if (xe.cols() < kSegmentFrames) {
    throw DataError("stoi: signal too short (need at least 384 ms of speech)");
  }

  const double clip = 1.0 + std::pow(10.0, -kClipDb / 20.0);
  std::vector<double> xs(kSegmentFrames);
  std::vector<double> ys(kSegmentFrames);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t m = kSegmentFrames; m <= xe.cols(); ++m) {
    const std::size_t first = m - kSegmentFrames;
    for (std::size_t j = 0; j < kBands; ++j) {
      double xn = 0.0;
      double yn = 0.0;
      for (std::size_t t = 0; t < kSegmentFrames; ++t) {
        xs[t] = xe(j, first + t);
        ys[t] = ye(j, first + t);
        xn += xs[t] * xs[t];
        yn += ys[t] * ys[t];
      }
      // Scale the degraded envelope to the clean envelope's energy, then
      // clip it to at most (1 + 10^(-beta/20)) times the clean envelope.
      const double gain = yn > 0.0 ? std::sqrt(xn / yn) : 0.0;
      for (std::size_t t = 0; t < kSegmentFrames; ++t) {
        ys[t] = std::min(ys[t] * gain, clip * xs[t]);
      }
      total += correlation(xs, ys);
      ++count;
    }
  }
  return std::clamp(total / static_cast<double>(count), 0.0, 1.0);
}

}  // namespace tfsep
