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

#include "tfsep/masking.hpp"

#include <cmath>
#include <sstream>

#include "tfsep/error.hpp"
#include "tfsep/wavelet.hpp"

namespace tfsep {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_congruent(const TFRepresentation& a, const TFRepresentation& b,
                       const char* what) {
  if (!a.congruent(b)) {
    throw InvalidArgument(std::string(what) +
                          ": representations have different shapes");
  }
}

void require_congruent(const TFRepresentation& tf, const Mask& m) {
  bool ok = m.weights.size() == tf.band_count();
  for (std::size_t b = 0; ok && b < m.weights.size(); ++b) {
    ok = m.weights[b].size() == tf.band_size(b);
  }
  if (!ok) throw InvalidArgument("apply_mask: mask shape does not match");
}

}  // namespace

std::string DecompositionConfig::method() const {
  return std::visit(Overloaded{[](const StftConfig&) { return "stft"; },
                               [](const DwtConfig&) { return "dwt"; },
                               [](const WptConfig&) { return "wpt"; }},
                    kind);
}

std::string DecompositionConfig::params() const {
  std::ostringstream out;
  std::visit(Overloaded{[&](const StftConfig& c) {
                          out << to_string(c.window) << " win=" << c.win_size
                              << " hop=" << c.hop << " fft=" << c.fft_size;
                        },
                        [&](const DwtConfig& c) {
                          out << c.wavelet << " levels=" << c.levels
                              << " mode=" << to_string(c.mode);
                        },
                        [&](const WptConfig& c) {
                          out << c.wavelet << " levels=" << c.levels
                              << " mode=" << to_string(c.mode);
                        }},
             kind);
  return out.str();
}

std::size_t TFRepresentation::band_count() const {
  return std::visit([](const auto& b) { return b.size(); }, bands);
}

std::size_t TFRepresentation::band_size(std::size_t band) const {
  return std::visit([&](const auto& b) { return b.at(band).size(); }, bands);
}

double TFRepresentation::magnitude(std::size_t band, std::size_t i) const {
  return std::visit([&](const auto& b) { return std::abs(b[band][i]); }, bands);
}

bool TFRepresentation::congruent(const TFRepresentation& other) const {
  if (bands.index() != other.bands.index() || band_count() != other.band_count()) {
    return false;
  }
  for (std::size_t b = 0; b < band_count(); ++b) {
    if (band_size(b) != other.band_size(b)) return false;
  }
  return true;
}

TFRepresentation decompose(const Signal& s, const DecompositionConfig& cfg) {
  TFRepresentation tf;
  tf.config = cfg;
  tf.rate = s.rate;
  tf.original_len = s.size();
  std::visit(
      Overloaded{
          [&](const StftConfig& c) {
            const auto m = stft(s, c);
            TFRepresentation::ComplexBands bands(m.coeffs.rows());
            for (std::size_t r = 0; r < m.coeffs.rows(); ++r) {
              auto row = m.coeffs.row(r);
              bands[r].assign(row.begin(), row.end());
            }
            tf.bands = std::move(bands);
            tf.layout = BandLayout::Rectangular;
          },
          [&](const DwtConfig& c) {
            const auto coeffs = wavedec(s, lookup(c.wavelet), c.levels, c.mode);
            TFRepresentation::RealBands bands{coeffs.approx};
            for (std::size_t l = coeffs.levels; l >= 1; --l) {
              bands.push_back(coeffs.detail(l));
            }
            tf.bands = std::move(bands);
            tf.layout = BandLayout::Ragged;
          },
          [&](const WptConfig& c) {
            const auto leaves = wpt(s, lookup(c.wavelet), c.levels, c.mode);
            TFRepresentation::RealBands bands(leaves.leaves.rows());
            for (std::size_t r = 0; r < bands.size(); ++r) {
              auto row = leaves.leaves.row(r);
              bands[r].assign(row.begin(), row.end());
            }
            tf.bands = std::move(bands);
            tf.layout = BandLayout::Rectangular;
          }},
      cfg.kind);
  return tf;
}

Signal reconstruct(const TFRepresentation& tf) {
  return std::visit(
      Overloaded{
          [&](const StftConfig& c) {
            const auto& bands = std::get<TFRepresentation::ComplexBands>(tf.bands);
            StftMatrix m{Matrix<Complex>(bands.size(), bands.empty() ? 0 : bands[0].size()),
                         c, tf.rate, tf.original_len};
            for (std::size_t r = 0; r < bands.size(); ++r) {
              std::copy(bands[r].begin(), bands[r].end(), m.coeffs.row(r).begin());
            }
            return istft(m);
          },
          [&](const DwtConfig& c) {
            const auto& bands = std::get<TFRepresentation::RealBands>(tf.bands);
            if (bands.size() != c.levels + 1) {
              throw InvalidArgument("reconstruct: DWT band count mismatch");
            }
            DwtCoeffs coeffs;
            coeffs.levels = c.levels;
            coeffs.mode = c.mode;
            coeffs.original_len = tf.original_len;
            coeffs.rate = tf.rate;
            coeffs.wavelet = c.wavelet;
            coeffs.approx = bands[0];
            coeffs.details.resize(c.levels);
            for (std::size_t b = 1; b < bands.size(); ++b) {
              coeffs.details[c.levels - b] = bands[b];
            }
            return waverec(coeffs, lookup(c.wavelet));
          },
          [&](const WptConfig& c) {
            const auto& bands = std::get<TFRepresentation::RealBands>(tf.bands);
            WptLeaves leaves{Matrix<double>(bands.size(), bands.empty() ? 0 : bands[0].size()),
                             c.levels, c.wavelet, c.mode, tf.original_len, tf.rate};
            for (std::size_t r = 0; r < bands.size(); ++r) {
              std::copy(bands[r].begin(), bands[r].end(), leaves.leaves.row(r).begin());
            }
            return iwpt(leaves, lookup(c.wavelet));
          }},
      tf.config.kind);
}

TFRepresentation sum(std::span<const TFRepresentation> parts) {
  if (parts.empty()) throw InvalidArgument("sum: no representations given");
  TFRepresentation total = parts.front();
  for (std::size_t p = 1; p < parts.size(); ++p) {
    require_congruent(total, parts[p], "sum");
    std::visit(
        [&](auto& acc) {
          using Bands = std::decay_t<decltype(acc)>;
          const auto& src = std::get<Bands>(parts[p].bands);
          for (std::size_t b = 0; b < acc.size(); ++b) {
            for (std::size_t i = 0; i < acc[b].size(); ++i) acc[b][i] += src[b][i];
          }
        },
        total.bands);
  }
  return total;
}

Mask ideal_binary_mask(const TFRepresentation& target,
                       const TFRepresentation& interference, double threshold) {
  require_congruent(target, interference, "ideal_binary_mask");
  Mask mask{{}, MaskKind::Binary};
  mask.weights.resize(target.band_count());
  for (std::size_t b = 0; b < target.band_count(); ++b) {
    auto& w = mask.weights[b];
    w.resize(target.band_size(b));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double diff = target.magnitude(b, i) - interference.magnitude(b, i);
      w[i] = diff >= threshold ? 1.0 : 0.0;
    }
  }
  return mask;
}

Mask ideal_ratio_mask(const TFRepresentation& target,
                      const TFRepresentation& interference) {
  require_congruent(target, interference, "ideal_ratio_mask");
  constexpr double kSilentEnergy = 1e-30;
  Mask mask{{}, MaskKind::Ratio};
  mask.weights.resize(target.band_count());
  for (std::size_t b = 0; b < target.band_count(); ++b) {
    auto& w = mask.weights[b];
    w.resize(target.band_size(b));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double s = target.magnitude(b, i);
      const double n = interference.magnitude(b, i);
      const double es = s * s;
      const double en = n * n;
      w[i] = (es < kSilentEnergy && en < kSilentEnergy) ? 0.0 : es / (es + en);
    }
  }
  return mask;
}

TFRepresentation apply_mask(const TFRepresentation& tf, const Mask& mask) {
  require_congruent(tf, mask);
  TFRepresentation out = tf;
  std::visit(
      [&](auto& bands) {
        for (std::size_t b = 0; b < bands.size(); ++b) {
          for (std::size_t i = 0; i < bands[b].size(); ++i) {
            bands[b][i] *= mask.weights[b][i];
          }
        }
      },
      out.bands);
  return out;
}

}  // namespace tfsep
