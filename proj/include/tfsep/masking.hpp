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
#include <string>
#include <variant>
#include <vector>

#include "tfsep/fourier.hpp"
#include "tfsep/signal.hpp"

namespace tfsep {

struct DwtConfig {
  std::string wavelet = "sym8";
  std::size_t levels = 6;
  PadMode mode = PadMode::Periodic;
};

struct WptConfig {
  std::string wavelet = "sym8";
  std::size_t levels = 6;
  PadMode mode = PadMode::Periodic;
};

/// The invertible linear transform D used for masking.
struct DecompositionConfig {
  std::variant<StftConfig, DwtConfig, WptConfig> kind;

  /// "stft", "dwt" or "wpt".
  std::string method() const;
  /// Human-readable parameter summary, e.g. "hann win=800 hop=400 fft=1024".
  std::string params() const;
};

enum class BandLayout { Rectangular, Ragged };

/// Transform coefficients organised as bands: STFT frequency rows (complex),
/// DWT bands in [approx, detail_L .. detail_1] order, or WPT leaves in
/// frequency order.
struct TFRepresentation {
  using ComplexBands = std::vector<std::vector<Complex>>;
  using RealBands = std::vector<std::vector<double>>;

  std::variant<ComplexBands, RealBands> bands;
  BandLayout layout = BandLayout::Rectangular;
  DecompositionConfig config;
  int rate = 0;
  std::size_t original_len = 0;

  bool is_complex() const { return bands.index() == 0; }
  std::size_t band_count() const;
  std::size_t band_size(std::size_t band) const;
  double magnitude(std::size_t band, std::size_t i) const;
  /// True when both representations have identical band structure.
  bool congruent(const TFRepresentation& other) const;
};

enum class MaskKind { Binary, Ratio };

struct Mask {
  std::vector<std::vector<double>> weights;
  MaskKind kind = MaskKind::Binary;
};

TFRepresentation decompose(const Signal& s, const DecompositionConfig& cfg);
Signal reconstruct(const TFRepresentation& tf);

/// Coefficient-wise sum of congruent representations.
TFRepresentation sum(std::span<const TFRepresentation> parts);

/// 1 where |S| - |N| >= threshold, else 0.
Mask ideal_binary_mask(const TFRepresentation& target,
                       const TFRepresentation& interference,
                       double threshold = 0.0);

/// |S|^2 / (|S|^2 + |N|^2); 0 where both energies are below 1e-30.
Mask ideal_ratio_mask(const TFRepresentation& target,
                      const TFRepresentation& interference);

/// Band-wise element-wise product; complex phases are preserved.
TFRepresentation apply_mask(const TFRepresentation& tf, const Mask& mask);

}  // namespace tfsep
