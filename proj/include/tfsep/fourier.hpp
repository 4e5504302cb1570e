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

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tfsep/matrix.hpp"
#include "tfsep/signal.hpp"

namespace tfsep {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// Precomputed bit-reversal table and twiddles for one radix-2 size.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place transform. The inverse is scaled by 1/N.
  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  void transform(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddles_;  // e^{-i 2 pi k / n}, k < n/2
};

/// X[k] = sum_n x[n] e^{-i 2 pi k n / N}; N must be a power of two.
std::vector<Complex> fft(std::span<const Complex> x);
/// Inverse of fft, including the 1/N factor.
std::vector<Complex> ifft(std::span<const Complex> x);

enum class WindowKind { Rectangular, Hann };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view text);

/// Rectangular: all ones. Hann: periodic form 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> make_window(WindowKind kind, std::size_t n);

struct StftConfig {
  WindowKind window = WindowKind::Hann;
  std::size_t win_size = 512;
  std::size_t hop = 256;
  std::size_t fft_size = 512;

  /// Throws InvalidArgument unless 0 < hop <= win_size <= fft_size and
  /// fft_size is a power of two.
  void validate() const;

  /// Window of floor(win_ms * rate / 1000) samples, hop of
  /// round(hop_fraction * win_size), FFT size rounded up to a power of two.
  static StftConfig from_ms(WindowKind window, double win_ms,
                            double hop_fraction, int rate);
};

/// Complex STFT coefficients: one row per analyzed frequency (fft_size/2 + 1
/// rows, DC first) and one column per frame.
struct StftMatrix {
  Matrix<Complex> coeffs;
  StftConfig config;
  int rate = 0;
  std::size_t original_len = 0;
};

/// Number of frames stft produces for a signal of the given length.
std::size_t stft_frame_count(std::size_t signal_len, const StftConfig& cfg);

/// The signal is zero-padded by win_size/2 on both sides (and at the end as
/// needed to fill the last frame), framed at stride hop, windowed, zero-padded
/// to fft_size and transformed.
StftMatrix stft(const Signal& s, const StftConfig& cfg);

/// Weighted overlap-add with window-square normalization, trimmed to
/// original_len. Throws if the normalization vanishes anywhere in the kept
/// range.
Signal istft(const StftMatrix& m);

/// {k * rate / fft_size : k = 0 .. fft_size/2}.
std::vector<double> stft_frequencies(std::size_t fft_size, int rate);

Matrix<double> magnitude(const Matrix<Complex>& m);

/// Comma-separated rows, row 0 first. Values are written with 17 significant
/// digits.
void write_csv(const Matrix<double>& m, const std::filesystem::path& path);
Matrix<double> read_csv(const std::filesystem::path& path);

/// Binary P5, maxval 255. Pixel values are the log-magnitude (dB, floored at
/// 80 dB below the peak) min-max normalized to [0, 255]. Row 0 of the matrix
/// (lowest frequency) becomes the bottom image row. An all-equal matrix maps
/// to an all-zero image.
void write_pgm(const Matrix<double>& m, const std::filesystem::path& path);

/// Writes |m| as a PGM heat map and, if csv_path is given, as CSV.
void export_heatmap(const Matrix<double>& m,
                    const std::filesystem::path& pgm_path,
                    const std::optional<std::filesystem::path>& csv_path = {});

}  // namespace tfsep
