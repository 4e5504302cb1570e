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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tfsep {

/// A finite, mono, real-valued discrete signal. Samples are doubles
/// nominally in [-1, 1]; integer PCM is converted on ingestion.
struct Signal {
  std::vector<double> samples;
  int rate = 0;  // Hz

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / rate;
  }
};

/// Builds a Signal after checking that rate > 0 and every sample is finite.
Signal make_signal(std::vector<double> samples, int rate);

enum class PadMode { Zero, Periodic, Symmetric };

std::string_view to_string(PadMode mode);
/// Accepts "zero", "periodic"/"periodization"/"per", "symmetric"/"sym".
PadMode parse_pad_mode(std::string_view text);

/// Maps an arbitrary (possibly negative or past-the-end) index onto [0, n)
/// for the Periodic and Symmetric extensions. Symmetric mirrors about the
/// half-sample point, so x[-1] == x[0] and x[n] == x[n-1].
std::size_t extension_index(std::ptrdiff_t i, std::size_t n, PadMode mode);

enum class ConvolveMode { Full, Same };

/// y[t] = sum_n x[n] h[t - n]. Full yields |x|+|h|-1 samples; Same yields the
/// centered |x|-sample slice of Full.
std::vector<double> convolve(std::span<const double> x,
                             std::span<const double> h,
                             ConvolveMode mode = ConvolveMode::Full);

/// Keeps x[0], x[2], ... (ceil(|x|/2) samples).
std::vector<double> downsample2(std::span<const double> x);
/// Interleaves zeros: out[2k] = x[k], out[2k+1] = 0.
std::vector<double> upsample2(std::span<const double> x);

/// Extends x at the end to target_len samples. x is always a prefix of the
/// result.
std::vector<double> pad(std::span<const double> x, std::size_t target_len,
                        PadMode mode);

double dot(std::span<const double> x, std::span<const double> y);
double l2_norm(std::span<const double> x);

/// Windowed-sinc resampler (64 taps per output sample, anti-aliased when
/// decimating). Same-rate resampling returns the input unchanged.
Signal resample(const Signal& s, int to_rate);

}  // namespace tfsep
