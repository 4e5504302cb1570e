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

#include "tfsep/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "tfsep/error.hpp"

namespace tfsep {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftPlan::FftPlan(std::size_t n) : n_(n), bitrev_(n), twiddles_(n / 2) {
  if (!is_power_of_two(n)) {
    throw InvalidArgument("FFT length must be a power of two, got " +
                          std::to_string(n));
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  // Each twiddle is evaluated directly rather than by repeated
  // multiplication, which keeps the error at the 1e-15 level for large n.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }

void FftPlan::inverse(std::span<Complex> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_) {
    throw InvalidArgument("FftPlan: buffer length does not match plan size");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<Complex> fft(std::span<const Complex> x) {
  FftPlan plan(x.size());
  std::vector<Complex> out(x.begin(), x.end());
  plan.forward(out);
  return out;
}

std::vector<Complex> ifft(std::span<const Complex> x) {
  FftPlan plan(x.size());
  std::vector<Complex> out(x.begin(), x.end());
  plan.inverse(out);
  return out;
}

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::Hann ? "hann" : "rect";
}

WindowKind parse_window_kind(std::string_view text) {
  if (text == "hann") return WindowKind::Hann;
  if (text == "rect" || text == "rectangular") return WindowKind::Rectangular;
  throw InvalidArgument("unknown window '" + std::string(text) +
                        "' (expected hann or rect)");
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  if (n < 2) {
    throw InvalidArgument("window length must be at least 2, got " +
                          std::to_string(n));
  }
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::Hann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

void StftConfig::validate() const {
  if (hop == 0 || hop > win_size || win_size > fft_size) {
    throw InvalidArgument(
        "STFT config requires 0 < hop <= win_size <= fft_size (hop=" +
        std::to_string(hop) + ", win=" + std::to_string(win_size) +
        ", fft=" + std::to_string(fft_size) + ")");
  }
  if (!is_power_of_two(fft_size)) {
    throw InvalidArgument("STFT fft_size must be a power of two, got " +
                          std::to_string(fft_size));
  }
  if (win_size < 2) throw InvalidArgument("STFT window must be >= 2 samples");
}

StftConfig StftConfig::from_ms(WindowKind window, double win_ms,
                               double hop_fraction, int rate) {
  if (win_ms <= 0.0 || hop_fraction <= 0.0 || hop_fraction > 1.0 || rate <= 0) {
    throw InvalidArgument("invalid millisecond STFT parameters");
  }
  StftConfig cfg;
  cfg.window = window;
  // The epsilon absorbs binary representation error, e.g. 0.032 * 16000.
  cfg.win_size =
      static_cast<std::size_t>(std::floor(win_ms * rate / 1000.0 + 1e-9));
  cfg.hop = static_cast<std::size_t>(
      std::llround(hop_fraction * static_cast<double>(cfg.win_size)));
  cfg.fft_size = next_power_of_two(cfg.win_size);
  cfg.validate();
  return cfg;
}

std::size_t stft_frame_count(std::size_t signal_len, const StftConfig& cfg) {
  const std::size_t padded = signal_len + 2 * (cfg.win_size / 2);
  if (signal_len == 0 || padded < cfg.win_size) return 0;
  return 1 + (padded - cfg.win_size + cfg.hop - 1) / cfg.hop;
}

StftMatrix stft(const Signal& s, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t frames = stft_frame_count(s.size(), cfg);
  if (frames == 0) {
    throw InvalidArgument("stft: signal is shorter than one window");
  }
  const std::size_t offset = cfg.win_size / 2;
  const std::size_t bins = cfg.fft_size / 2 + 1;
  const auto window = make_window(cfg.window, cfg.win_size);
  const FftPlan plan(cfg.fft_size);

  StftMatrix out{Matrix<Complex>(bins, frames), cfg, s.rate, s.size()};
  std::vector<Complex> buf(cfg.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), Complex{});
    const std::size_t start = t * cfg.hop;  // in padded coordinates
    for (std::size_t n = 0; n < cfg.win_size; ++n) {
      const std::size_t p = start + n;
      if (p < offset || p - offset >= s.size()) continue;
      buf[n] = window[n] * s.samples[p - offset];
    }
    plan.forward(buf);
    for (std::size_t k = 0; k < bins; ++k) out.coeffs(k, t) = buf[k];
  }
  return out;
}

Signal istft(const StftMatrix& m) {
  const auto& cfg = m.config;
  cfg.validate();
  const std::size_t bins = cfg.fft_size / 2 + 1;
  if (m.coeffs.rows() != bins) {
    throw InvalidArgument("istft: coefficient matrix must have fft_size/2+1 rows");
  }
  const std::size_t frames = m.coeffs.cols();
  const std::size_t offset = cfg.win_size / 2;
  const std::size_t total = frames == 0 ? 0 : (frames - 1) * cfg.hop + cfg.win_size;
  if (m.original_len + offset > total) {
    throw InvalidArgument("istft: frame count does not cover original_len");
  }
  const auto window = make_window(cfg.window, cfg.win_size);
  const FftPlan plan(cfg.fft_size);

  std::vector<double> acc(total, 0.0);
  std::vector<double> norm(total, 0.0);
  std::vector<Complex> buf(cfg.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) buf[k] = m.coeffs(k, t);
    // Rebuild the negative frequencies from conjugate symmetry.
    for (std::size_t k = bins; k < cfg.fft_size; ++k) {
      buf[k] = std::conj(buf[cfg.fft_size - k]);
    }
    plan.inverse(buf);
    const std::size_t start = t * cfg.hop;
    for (std::size_t n = 0; n < cfg.win_size; ++n) {
      acc[start + n] += window[n] * buf[n].real();
      norm[start + n] += window[n] * window[n];
    }
  }

  std::vector<double> out(m.original_len);
  for (std::size_t i = 0; i < m.original_len; ++i) {
    const double d = norm[i + offset];
    if (d < 1e-12) {
      throw InvalidArgument(
          "istft: window overlap does not cover sample " + std::to_string(i) +
          " (configuration is not invertible)");
    }
    out[i] = acc[i + offset] / d;
  }
  return Signal{std::move(out), m.rate};
}

std::vector<double> stft_frequencies(std::size_t fft_size, int rate) {
  if (!is_power_of_two(fft_size)) {
    throw InvalidArgument("fft_size must be a power of two");
  }
  std::vector<double> f(fft_size / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k) * rate / static_cast<double>(fft_size);
  }
  return f;
}

Matrix<double> magnitude(const Matrix<Complex>& m) {
  Matrix<double> out(m.rows(), m.cols());
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return out;
}

void write_csv(const Matrix<double>& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Matrix<double> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("'" + path.string() + "': bad numeric cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("'" + path.string() + "': ragged CSV rows");
    }
    rows.push_back(std::move(row));
  }
  Matrix<double> m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

void write_pgm(const Matrix<double>& m, const std::filesystem::path& path) {
  constexpr double kDynamicRangeDb = 80.0;
  double peak = 0.0;
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("heat map values must be finite");
    peak = std::max(peak, std::abs(v));
  }
  std::vector<double> level(m.size(), 0.0);
  double lo = 0.0;
  double hi = 0.0;
  if (peak > 0.0) {
    const double floor_db = 20.0 * std::log10(peak) - kDynamicRangeDb;
    lo = 20.0 * std::log10(peak);
    hi = lo;
    auto src = m.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double a = std::abs(src[i]);
      level[i] = a > 0.0 ? std::max(20.0 * std::log10(a), floor_db) : floor_db;
      lo = std::min(lo, level[i]);
      hi = std::max(hi, level[i]);
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  std::vector<std::uint8_t> row(m.cols());
  for (std::size_t r = m.rows(); r-- > 0;) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double v = level[r * m.cols() + c];
      row[c] = hi > lo ? static_cast<std::uint8_t>(
                             std::lround(255.0 * (v - lo) / (hi - lo)))
                       : 0;
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void export_heatmap(const Matrix<double>& m,
                    const std::filesystem::path& pgm_path,
                    const std::optional<std::filesystem::path>& csv_path) {
  Matrix<double> mag(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) mag.data()[i] = std::abs(m.data()[i]);
  write_pgm(mag, pgm_path);
  if (csv_path) write_csv(mag, *csv_path);
}

}  // namespace tfsep
