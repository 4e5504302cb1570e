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
#include <string_view>
#include <vector>

#include "tfsep/matrix.hpp"
#include "tfsep/signal.hpp"

namespace tfsep {

/// Two-channel orthogonal filter bank. dec_* are the analysis (convolution)
/// filters, rec_* the synthesis filters.
struct WaveletFilterBank {
  std::string name;
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;
  int vanishing_moments = 0;
  int order = 0;  // family index (p of db-p, sym-p, coif-p)

  std::size_t length() const { return dec_lo.size(); }
};

/// Builds an orthogonal bank from its analysis low-pass filter: the
/// high-pass is the CQF of the low-pass and the synthesis filters are the
/// time reverses of the analysis ones.
WaveletFilterBank make_orthogonal_bank(std::string name,
                                       std::vector<double> dec_lo,
                                       int vanishing_moments, int order);

/// Registry lookup: haar, db1..db20, sym2..sym20, coif1..coif17.
const WaveletFilterBank& lookup(std::string_view name);
std::vector<std::string> available_wavelets();

/// g_i = (-1)^i h_i
std::vector<double> qmf_highpass(std::span<const double> h);
/// g_i = (-1)^i h_{N-1-i}
std::vector<double> cqf_highpass(std::span<const double> h);

struct PrCheck {
  bool ok = false;
  std::size_t delay = 0;  // l in 2 z^{-l}
};

/// Checks the no-distortion condition Hr(z)H(z) + Gr(z)G(z) = 2 z^{-l} and
/// the alias-cancellation condition Hr(z)H(-z) + Gr(z)G(-z) = 0 by
/// polynomial (coefficient) multiplication.
PrCheck verify_pr(const WaveletFilterBank& bank, double tol = 1e-8);

/// Coefficient count per band after one analysis step on n samples.
/// Periodic: ceil(n/2). Zero/Symmetric: floor((n + F) / 2) with F the filter
/// length, enough for exact reconstruction of the boundary samples.
std::size_t dwt_coeff_len(std::size_t n, std::size_t filter_len, PadMode mode);

struct DwtStep {
  std::vector<double> approx;
  std::vector<double> detail;
};

/// One analysis step: low/high-pass filtering followed by dyadic
/// downsampling. Periodic mode zero-pads odd inputs by one sample.
DwtStep dwt_step(std::span<const double> x, const WaveletFilterBank& bank,
                 PadMode mode = PadMode::Periodic);

/// Inverts dwt_step; out_len is the length of the analyzed input.
std::vector<double> idwt_step(std::span<const double> approx,
                              std::span<const double> detail,
                              const WaveletFilterBank& bank, PadMode mode,
                              std::size_t out_len);

std::size_t max_dwt_levels(std::size_t n);

struct DwtCoeffs {
  std::vector<double> approx;                // level-L approximation
  std::vector<std::vector<double>> details;  // details[0] is level 1 (finest)
  std::size_t levels = 0;
  PadMode mode = PadMode::Periodic;
  std::size_t original_len = 0;
  int rate = 0;
  std::string wavelet;

  const std::vector<double>& detail(std::size_t level) const {
    return details.at(level - 1);
  }
};

DwtCoeffs wavedec(const Signal& s, const WaveletFilterBank& bank,
                  std::size_t levels, PadMode mode = PadMode::Periodic);
Signal waverec(const DwtCoeffs& coeffs, const WaveletFilterBank& bank);

/// [approx, detail_L, ..., detail_1].
std::vector<double> flatten(const DwtCoeffs& coeffs);
/// Band lengths in flatten order.
std::vector<std::size_t> band_lengths(const DwtCoeffs& coeffs);
/// Splits a flat vector back into bands shaped like `layout`.
DwtCoeffs unflatten(std::span<const double> flat, const DwtCoeffs& layout);

/// Rectangular |coefficient| matrix for heat maps: row 0 is the
/// approximation, then detail_L up to detail_1. Every band is stretched to
/// the level-1 length by repeating coefficients.
Matrix<double> dwt_scaleogram(const DwtCoeffs& coeffs);

/// k = G[j]: frequency rank of the j-th wavelet-packet node in natural
/// (filter-bank) order, from G[0] = 0 and the even/odd recurrence.
std::vector<std::size_t> gray_permutation(std::size_t levels);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> p);

struct WptLeaves {
  Matrix<double> leaves;  // 2^L rows in increasing center-frequency order
  std::size_t levels = 0;
  std::string wavelet;
  PadMode mode = PadMode::Periodic;
  std::size_t original_len = 0;
  int rate = 0;
};

/// Full binary-tree packet decomposition. In periodic mode the signal is
/// zero-padded to a multiple of 2^L first, so every leaf holds
/// ceil(original_len / 2^L) coefficients.
WptLeaves wpt(const Signal& s, const WaveletFilterBank& bank,
              std::size_t levels, PadMode mode = PadMode::Periodic);
Signal iwpt(const WptLeaves& leaves, const WaveletFilterBank& bank);

/// Largest p such that sum_n n^k dec_hi[n] vanishes (relative to the sum of
/// the absolute terms) for every k < p.
int count_vanishing_moments(const WaveletFilterBank& bank, int max_p = 40,
                            double tol = 1e-9);

/// Samples of the mother wavelet psi on a 2^-iterations grid, obtained by
/// iterating the refinement equations.
std::vector<double> wavelet_function(const WaveletFilterBank& bank,
                                     int iterations = 8);

/// Frequency (cycles per unit translation) of the sinusoid that best matches
/// psi over its support, i.e. with a whole number of periods in the support.
double central_frequency(const WaveletFilterBank& bank);
/// central_frequency * rate / scale, in Hz.
double scale_to_frequency(const WaveletFilterBank& bank, double scale,
                          int rate);

/// Ricker (Mexican hat) mother wavelet, unit width.
double ricker(double t);
/// Peak frequency of the Ricker spectrum, sqrt(2) / (2 pi) cycles/sample.
double ricker_central_frequency();

/// One row per scale: the signal convolved with the 1/sqrt(a)-normalized
/// Ricker wavelet sampled on [-8a, 8a]. The kernel mean is removed and the
/// signal is extended symmetrically at its edges.
Matrix<double> cwt_ricker(const Signal& s, std::span<const double> scales);

}  // namespace tfsep
