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

#include "tfsep/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tfsep/error.hpp"

namespace tfsep {

Signal make_signal(std::vector<double> samples, int rate) {
  if (rate <= 0) {
    throw InvalidArgument("signal rate must be positive, got " +
                          std::to_string(rate));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw InvalidArgument("signal sample " + std::to_string(i) +
                            " is not finite");
    }
  }
  return Signal{std::move(samples), rate};
}

std::string_view to_string(PadMode mode) {
  switch (mode) {
    case PadMode::Zero:
      return "zero";
    case PadMode::Periodic:
      return "periodization";
    case PadMode::Symmetric:
      return "symmetric";
  }
  return "?";
}

PadMode parse_pad_mode(std::string_view text) {
  if (text == "zero") return PadMode::Zero;
  if (text == "periodization" || text == "periodic" || text == "per") {
    return PadMode::Periodic;
  }
  if (text == "symmetric" || text == "sym") return PadMode::Symmetric;
  throw InvalidArgument("unknown padding mode '" + std::string(text) +
                        "' (expected zero, periodization or symmetric)");
}

std::size_t extension_index(std::ptrdiff_t i, std::size_t n, PadMode mode) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  if (mode == PadMode::Symmetric) {
    const std::ptrdiff_t period = 2 * len;
    std::ptrdiff_t j = i % period;
    if (j < 0) j += period;
    return static_cast<std::size_t>(j < len ? j : period - 1 - j);
  }
  std::ptrdiff_t j = i % len;
  if (j < 0) j += len;
  return static_cast<std::size_t>(j);
}

std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h, ConvolveMode mode) {
  if (x.empty() || h.empty()) {
    throw InvalidArgument("convolve: inputs must be non-empty");
  }
  std::vector<double> full(x.size() + h.size() - 1, 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double xn = x[n];
    for (std::size_t k = 0; k < h.size(); ++k) full[n + k] += xn * h[k];
  }
  if (mode == ConvolveMode::Full) return full;
  const std::size_t start = (h.size() - 1) / 2;
  return {full.begin() + static_cast<std::ptrdiff_t>(start),
          full.begin() + static_cast<std::ptrdiff_t>(start + x.size())};
}

std::vector<double> downsample2(std::span<const double> x) {
  std::vector<double> out((x.size() + 1) / 2);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[2 * k];
  return out;
}

std::vector<double> upsample2(std::span<const double> x) {
  std::vector<double> out(2 * x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) out[2 * k] = x[k];
  return out;
}

std::vector<double> pad(std::span<const double> x, std::size_t target_len,
                        PadMode mode) {
  if (target_len < x.size()) {
    throw InvalidArgument("pad: target length " + std::to_string(target_len) +
                          " is shorter than the input (" +
                          std::to_string(x.size()) + ")");
  }
  std::vector<double> out(x.begin(), x.end());
  out.resize(target_len, 0.0);
  if (mode == PadMode::Zero || x.empty()) return out;
  for (std::size_t i = x.size(); i < target_len; ++i) {
    out[i] = x[extension_index(static_cast<std::ptrdiff_t>(i), x.size(), mode)];
  }
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("dot: length mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double l2_norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

namespace {

constexpr int kResampleTaps = 64;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Blackman window over (-half, half).
double blackman(double x, double half) {
  const double u = (x + half) / (2.0 * half);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = 2.0 * std::numbers::pi * u;
  return 0.42 - 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
}

}  // namespace

Signal resample(const Signal& s, int to_rate) {
  if (to_rate <= 0) {
    throw InvalidArgument("resample: target rate must be positive");
  }
  if (to_rate == s.rate || s.samples.empty()) {
    return Signal{s.samples, to_rate};
  }
  const double ratio = static_cast<double>(to_rate) / s.rate;
  const double cutoff = std::min(1.0, ratio);
  const auto n_in = static_cast<std::ptrdiff_t>(s.samples.size());
  const auto n_out = static_cast<std::size_t>(
      std::ceil(static_cast<double>(s.samples.size()) * ratio - 1e-9));
  constexpr double half = kResampleTaps / 2 + 1;

  std::vector<double> out(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double pos = static_cast<double>(i) / ratio;
    const auto base = static_cast<std::ptrdiff_t>(std::floor(pos));
    double acc = 0.0;
    double weight_sum = 0.0;
    for (std::ptrdiff_t k = base - kResampleTaps / 2 + 1;
         k <= base + kResampleTaps / 2; ++k) {
      if (k < 0 || k >= n_in) continue;
      const double d = pos - static_cast<double>(k);
      const double w = cutoff * sinc(cutoff * d) * blackman(d, half);
      acc += w * s.samples[static_cast<std::size_t>(k)];
      weight_sum += w;
    }
    // Normalizing by the realized tap sum keeps DC exact, including at the
    // edges where taps fall outside the signal.
    out[i] = weight_sum != 0.0 ? acc / weight_sum : 0.0;
  }
  return Signal{std::move(out), to_rate};
}

}  // namespace tfsep
