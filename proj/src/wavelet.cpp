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

#include "tfsep/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>

#include "filter_tables.hpp"
#include "tfsep/error.hpp"
#include "tfsep/fourier.hpp"

namespace tfsep {

std::vector<double> qmf_highpass(std::span<const double> h) {
  std::vector<double> g(h.begin(), h.end());
  for (std::size_t i = 1; i < g.size(); i += 2) g[i] = -g[i];
  return g;
}

std::vector<double> cqf_highpass(std::span<const double> h) {
  const std::size_t n = h.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = (i % 2 == 0 ? 1.0 : -1.0) * h[n - 1 - i];
  }
  return g;
}

WaveletFilterBank make_orthogonal_bank(std::string name,
                                       std::vector<double> dec_lo,
                                       int vanishing_moments, int order) {
  if (dec_lo.empty()) throw InvalidArgument("filter bank needs coefficients");
  WaveletFilterBank bank;
  bank.name = std::move(name);
  bank.dec_hi = cqf_highpass(dec_lo);
  bank.rec_lo.assign(dec_lo.rbegin(), dec_lo.rend());
  bank.rec_hi.assign(bank.dec_hi.rbegin(), bank.dec_hi.rend());
  bank.dec_lo = std::move(dec_lo);
  bank.vanishing_moments = vanishing_moments;
  bank.order = order;
  return bank;
}

namespace {

const std::map<std::string, WaveletFilterBank, std::less<>>& registry() {
  static const auto banks = [] {
    std::map<std::string, WaveletFilterBank, std::less<>> m;
    for (const auto& t : detail::filter_tables()) {
      auto bank = make_orthogonal_bank(std::string(t.name),
                                       {t.dec_lo.begin(), t.dec_lo.end()},
                                       t.moments, t.order);
      // Record what the filter actually achieves. High-order coiflets
      // measure above their nominal 2p at this tolerance.
      bank.vanishing_moments = count_vanishing_moments(bank);
      m.emplace(std::string(t.name), std::move(bank));
    }
    return m;
  }();
  return banks;
}

}  // namespace

const WaveletFilterBank& lookup(std::string_view name) {
  const auto& reg = registry();
  if (auto it = reg.find(name); it != reg.end()) return it->second;
  std::string msg = "unknown wavelet '" + std::string(name) + "'; available:";
  for (const auto& [n, _] : reg) msg += " " + n;
  throw InvalidArgument(msg);
}

std::vector<std::string> available_wavelets() {
  std::vector<std::string> names;
  for (const auto& t : detail::filter_tables()) names.emplace_back(t.name);
  return names;
}

PrCheck verify_pr(const WaveletFilterBank& bank, double tol) {
  if (bank.dec_lo.empty() || bank.dec_hi.empty() || bank.rec_lo.empty() ||
      bank.rec_hi.empty()) {
    return {};
  }
  auto add = [](std::vector<double> a, const std::vector<double>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
  };
  // H(-z) has coefficients (-1)^n h[n], i.e. the QMF of h.
  const auto distortion = add(convolve(bank.rec_lo, bank.dec_lo),
                              convolve(bank.rec_hi, bank.dec_hi));
  const auto alias = add(convolve(bank.rec_lo, qmf_highpass(bank.dec_lo)),
                         convolve(bank.rec_hi, qmf_highpass(bank.dec_hi)));

  for (double v : alias) {
    if (std::abs(v) > tol) return {};
  }
  PrCheck result;
  std::size_t peaks = 0;
  for (std::size_t i = 0; i < distortion.size(); ++i) {
    if (std::abs(distortion[i] - 2.0) <= tol) {
      result.delay = i;
      ++peaks;
    } else if (std::abs(distortion[i]) > tol) {
      return {};
    }
  }
  result.ok = peaks == 1;
  return result;
}

std::size_t dwt_coeff_len(std::size_t n, std::size_t filter_len, PadMode mode) {
  if (mode == PadMode::Periodic) return (n + 1) / 2;
  return (n + filter_len) / 2;
}

DwtStep dwt_step(std::span<const double> x, const WaveletFilterBank& bank,
                 PadMode mode) {
  if (x.empty()) throw InvalidArgument("dwt_step: empty input");
  const std::size_t f = bank.length();
  const std::size_t n = x.size();
  const std::size_t out_len = dwt_coeff_len(n, f, mode);
  DwtStep out{std::vector<double>(out_len), std::vector<double>(out_len)};
  const double* lo = bank.rec_lo.data();
  const double* hi = bank.rec_hi.data();

  if (mode == PadMode::Periodic) {
    // Odd inputs are treated as zero-padded to even length.
    const std::size_t period = 2 * out_len;
    for (std::size_t k = 0; k < out_len; ++k) {
      double a = 0.0;
      double d = 0.0;
      std::size_t idx = (2 * k) % period;
      for (std::size_t m = 0; m < f; ++m) {
        const double v = idx < n ? x[idx] : 0.0;
        a += lo[m] * v;
        d += hi[m] * v;
        if (++idx == period) idx = 0;
      }
      out.approx[k] = a;
      out.detail[k] = d;
    }
    return out;
  }

  // Coefficient k sees samples 2k - (F-1) .. 2k of the extended signal.
  const auto shift = static_cast<std::ptrdiff_t>(f) - 1;
  const auto len = static_cast<std::ptrdiff_t>(n);
  for (std::size_t k = 0; k < out_len; ++k) {
    double a = 0.0;
    double d = 0.0;
    const std::ptrdiff_t base = 2 * static_cast<std::ptrdiff_t>(k) - shift;
    for (std::size_t m = 0; m < f; ++m) {
      const std::ptrdiff_t i = base + static_cast<std::ptrdiff_t>(m);
      double v;
      if (i >= 0 && i < len) {
        v = x[static_cast<std::size_t>(i)];
      } else if (mode == PadMode::Zero) {
        continue;
      } else {
        v = x[extension_index(i, n, mode)];
      }
      a += lo[m] * v;
      d += hi[m] * v;
    }
    out.approx[k] = a;
    out.detail[k] = d;
  }
  return out;
}

std::vector<double> idwt_step(std::span<const double> approx,
                              std::span<const double> detail,
                              const WaveletFilterBank& bank, PadMode mode,
                              std::size_t out_len) {
  const std::size_t f = bank.length();
  if (approx.size() != detail.size() ||
      approx.size() != dwt_coeff_len(out_len, f, mode)) {
    throw InvalidArgument("idwt_step: band lengths do not match output length " +
                          std::to_string(out_len));
  }
  const double* lo = bank.rec_lo.data();
  const double* hi = bank.rec_hi.data();
  std::vector<double> x(out_len, 0.0);

  if (mode == PadMode::Periodic) {
    // Transpose of the periodized analysis operator.
    const std::size_t period = 2 * approx.size();
    std::vector<double> buf(period, 0.0);
    for (std::size_t k = 0; k < approx.size(); ++k) {
      const double a = approx[k];
      const double d = detail[k];
      std::size_t idx = (2 * k) % period;
      for (std::size_t m = 0; m < f; ++m) {
        buf[idx] += lo[m] * a + hi[m] * d;
        if (++idx == period) idx = 0;
      }
    }
    std::copy_n(buf.begin(), out_len, x.begin());
    return x;
  }

  const auto shift = static_cast<std::ptrdiff_t>(f) - 1;
  const auto len = static_cast<std::ptrdiff_t>(out_len);
  for (std::size_t k = 0; k < approx.size(); ++k) {
    const double a = approx[k];
    const double d = detail[k];
    const std::ptrdiff_t base = 2 * static_cast<std::ptrdiff_t>(k) - shift;
    for (std::size_t m = 0; m < f; ++m) {
      const std::ptrdiff_t i = base + static_cast<std::ptrdiff_t>(m);
      if (i >= 0 && i < len) x[static_cast<std::size_t>(i)] += lo[m] * a + hi[m] * d;
    }
  }
  return x;
}

std::size_t max_dwt_levels(std::size_t n) {
  std::size_t levels = 0;
  while ((std::size_t{2} << levels) <= n) ++levels;
  return levels;
}

namespace {

void check_levels(std::size_t levels, std::size_t n, const char* what) {
  if (levels < 1 || levels > max_dwt_levels(n)) {
    throw InvalidArgument(std::string(what) + ": levels must be in [1, " +
                          std::to_string(max_dwt_levels(n)) + "] for " +
                          std::to_string(n) + " samples, got " +
                          std::to_string(levels));
  }
}

// Input length of every analysis level: lengths[l] is the length fed to
// level l+1, lengths[L] the final band length.
std::vector<std::size_t> level_lengths(std::size_t n, std::size_t levels,
                                       std::size_t filter_len, PadMode mode) {
  std::vector<std::size_t> lengths{n};
  for (std::size_t l = 0; l < levels; ++l) {
    lengths.push_back(dwt_coeff_len(lengths.back(), filter_len, mode));
  }
  return lengths;
}

}  // namespace

DwtCoeffs wavedec(const Signal& s, const WaveletFilterBank& bank,
                  std::size_t levels, PadMode mode) {
  check_levels(levels, s.size(), "wavedec");
  DwtCoeffs out;
  out.levels = levels;
  out.mode = mode;
  out.original_len = s.size();
  out.rate = s.rate;
  out.wavelet = bank.name;
  std::vector<double> current = s.samples;
  for (std::size_t l = 0; l < levels; ++l) {
    auto step = dwt_step(current, bank, mode);
    out.details.push_back(std::move(step.detail));
    current = std::move(step.approx);
  }
  out.approx = std::move(current);
  return out;
}

Signal waverec(const DwtCoeffs& coeffs, const WaveletFilterBank& bank) {
  if (coeffs.details.size() != coeffs.levels || coeffs.levels == 0) {
    throw InvalidArgument("waverec: detail count does not match levels");
  }
  const auto lengths =
      level_lengths(coeffs.original_len, coeffs.levels, bank.length(), coeffs.mode);
  std::vector<double> current = coeffs.approx;
  for (std::size_t l = coeffs.levels; l >= 1; --l) {
    current = idwt_step(current, coeffs.detail(l), bank, coeffs.mode,
                        lengths[l - 1]);
  }
  return Signal{std::move(current), coeffs.rate};
}

std::vector<double> flatten(const DwtCoeffs& coeffs) {
  std::vector<double> flat(coeffs.approx);
  for (std::size_t l = coeffs.levels; l >= 1; --l) {
    const auto& d = coeffs.detail(l);
    flat.insert(flat.end(), d.begin(), d.end());
  }
  return flat;
}

std::vector<std::size_t> band_lengths(const DwtCoeffs& coeffs) {
  std::vector<std::size_t> lengths{coeffs.approx.size()};
  for (std::size_t l = coeffs.levels; l >= 1; --l) {
    lengths.push_back(coeffs.detail(l).size());
  }
  return lengths;
}

DwtCoeffs unflatten(std::span<const double> flat, const DwtCoeffs& layout) {
  const auto lengths = band_lengths(layout);
  if (std::accumulate(lengths.begin(), lengths.end(), std::size_t{0}) !=
      flat.size()) {
    throw InvalidArgument("unflatten: length does not match the band layout");
  }
  DwtCoeffs out = layout;
  auto it = flat.begin();
  out.approx.assign(it, it + static_cast<std::ptrdiff_t>(lengths[0]));
  it += static_cast<std::ptrdiff_t>(lengths[0]);
  for (std::size_t b = 1; b < lengths.size(); ++b) {
    const std::size_t level = layout.levels + 1 - b;
    out.details[level - 1].assign(it, it + static_cast<std::ptrdiff_t>(lengths[b]));
    it += static_cast<std::ptrdiff_t>(lengths[b]);
  }
  return out;
}

Matrix<double> dwt_scaleogram(const DwtCoeffs& coeffs) {
  const std::size_t width = coeffs.detail(1).size();
  Matrix<double> m(coeffs.levels + 1, width);
  auto stretch = [&](std::size_t row, const std::vector<double>& band) {
    for (std::size_t c = 0; c < width; ++c) {
      m(row, c) = std::abs(band[c * band.size() / width]);
    }
  };
  stretch(0, coeffs.approx);
  for (std::size_t l = coeffs.levels; l >= 1; --l) {
    stretch(coeffs.levels + 1 - l, coeffs.detail(l));
  }
  return m;
}

std::vector<std::size_t> gray_permutation(std::size_t levels) {
  std::vector<std::size_t> g{0};
  for (std::size_t l = 0; l < levels; ++l) {
    std::vector<std::size_t> next(2 * g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const bool even = g[j] % 2 == 0;
      next[2 * j] = even ? 2 * g[j] : 2 * g[j] + 1;
      next[2 * j + 1] = even ? 2 * g[j] + 1 : 2 * g[j];
    }
    g = std::move(next);
  }
  return g;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv.at(p[i]) = i;
  return inv;
}

WptLeaves wpt(const Signal& s, const WaveletFilterBank& bank,
              std::size_t levels, PadMode mode) {
  check_levels(levels, s.size(), "wpt");
  std::vector<double> root = s.samples;
  if (mode == PadMode::Periodic) {
    const std::size_t block = std::size_t{1} << levels;
    root.resize((root.size() + block - 1) / block * block, 0.0);
  }
  std::vector<std::vector<double>> nodes{std::move(root)};
  for (std::size_t l = 0; l < levels; ++l) {
    std::vector<std::vector<double>> next;
    next.reserve(2 * nodes.size());
    for (const auto& node : nodes) {
      auto step = dwt_step(node, bank, mode);
      next.push_back(std::move(step.approx));
      next.push_back(std::move(step.detail));
    }
    nodes = std::move(next);
  }
  const auto rank = gray_permutation(levels);
  WptLeaves out{Matrix<double>(nodes.size(), nodes.front().size()), levels,
                bank.name, mode, s.size(), s.rate};
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    std::copy(nodes[j].begin(), nodes[j].end(), out.leaves.row(rank[j]).begin());
  }
  return out;
}

Signal iwpt(const WptLeaves& leaves, const WaveletFilterBank& bank) {
  const std::size_t count = std::size_t{1} << leaves.levels;
  if (leaves.levels == 0 || leaves.leaves.rows() != count) {
    throw InvalidArgument("iwpt: leaf matrix must have 2^levels rows");
  }
  std::size_t root_len = leaves.original_len;
  if (leaves.mode == PadMode::Periodic) {
    root_len = (root_len + count - 1) / count * count;
  }
  const auto lengths = level_lengths(root_len, leaves.levels, bank.length(), leaves.mode);
  if (lengths.back() != leaves.leaves.cols()) {
    throw InvalidArgument("iwpt: leaf length does not match original_len");
  }
  const auto rank = gray_permutation(leaves.levels);
  std::vector<std::vector<double>> nodes(count);
  for (std::size_t j = 0; j < count; ++j) {
    auto row = leaves.leaves.row(rank[j]);
    nodes[j].assign(row.begin(), row.end());
  }
  for (std::size_t l = leaves.levels; l >= 1; --l) {
    std::vector<std::vector<double>> parents(nodes.size() / 2);
    for (std::size_t p = 0; p < parents.size(); ++p) {
      parents[p] = idwt_step(nodes[2 * p], nodes[2 * p + 1], bank, leaves.mode,
                             lengths[l - 1]);
    }
    nodes = std::move(parents);
  }
  nodes.front().resize(leaves.original_len);
  return Signal{std::move(nodes.front()), leaves.rate};
}

int count_vanishing_moments(const WaveletFilterBank& bank, int max_p,
                            double tol) {
  if (tol <= 0.0) throw InvalidArgument("count_vanishing_moments: tol must be > 0");
  const auto& g = bank.dec_hi;
  const double center = (static_cast<double>(g.size()) - 1.0) / 2.0;
  for (int k = 0; k < max_p; ++k) {
    double sum = 0.0;
    double scale = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double term = std::pow(static_cast<double>(n) - center, k) * g[n];
      sum += term;
      scale += std::abs(term);
    }
    if (scale == 0.0 || std::abs(sum) > tol * scale) return k;
  }
  return max_p;
}

std::vector<double> wavelet_function(const WaveletFilterBank& bank,
                                     int iterations) {
  if (iterations < 1) throw InvalidArgument("wavelet_function: iterations >= 1");
  // psi(t) = sqrt(2) sum_k g[k] phi(2t - k) and phi(t) = sqrt(2) sum_k
  // h[k] phi(2t - k). Unrolling both, the coarsest filter is g.
  std::vector<double> c(bank.rec_hi);
  for (auto& v : c) v *= std::numbers::sqrt2;
  for (int i = 1; i < iterations; ++i) {
    auto up = upsample2(c);
    up.pop_back();
    c = convolve(up, bank.rec_lo);
    for (auto& v : c) v *= std::numbers::sqrt2;
  }
  return c;
}

double central_frequency(const WaveletFilterBank& bank) {
  constexpr int kIterations = 8;
  constexpr std::size_t kFftSize = std::size_t{1} << 16;
  const auto psi = wavelet_function(bank, kIterations);
  const double dt = std::ldexp(1.0, -kIterations);
  const double support = static_cast<double>(bank.length() - 1);

  std::vector<Complex> buf(std::max(kFftSize, next_power_of_two(psi.size())));
  std::copy(psi.begin(), psi.end(), buf.begin());
  FftPlan(buf.size()).forward(buf);
  std::size_t peak = 1;
  for (std::size_t k = 1; k <= buf.size() / 2; ++k) {
    if (std::abs(buf[k]) > std::abs(buf[peak])) peak = k;
  }
  const double peak_freq =
      static_cast<double>(peak) / (static_cast<double>(buf.size()) * dt);

  // Restrict to sinusoids with a whole number of periods over the support
  // and keep the one with the largest spectral magnitude.
  auto magnitude_at = [&](double freq) {
    Complex acc{};
    for (std::size_t n = 0; n < psi.size(); ++n) {
      acc += psi[n] * std::polar(1.0, -2.0 * std::numbers::pi * freq *
                                          static_cast<double>(n) * dt);
    }
    return std::abs(acc);
  };
  const auto nearest = static_cast<long>(std::floor(peak_freq * support));
  double best_freq = 0.0;
  double best_mag = -1.0;
  for (long m = std::max(1L, nearest - 2); m <= nearest + 3; ++m) {
    const double freq = static_cast<double>(m) / support;
    if (const double mag = magnitude_at(freq); mag > best_mag) {
      best_mag = mag;
      best_freq = freq;
    }
  }
  return best_freq;
}

double scale_to_frequency(const WaveletFilterBank& bank, double scale,
                          int rate) {
  if (scale < 1.0 || rate <= 0) {
    throw InvalidArgument("scale_to_frequency: need scale >= 1 and rate > 0");
  }
  return central_frequency(bank) * rate / scale;
}

double ricker(double t) {
  static const double norm =
      2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));
  return norm * (1.0 - t * t) * std::exp(-0.5 * t * t);
}

double ricker_central_frequency() {
  return std::numbers::sqrt2 / (2.0 * std::numbers::pi);
}

Matrix<double> cwt_ricker(const Signal& s, std::span<const double> scales) {
  for (double a : scales) {
    if (!(a > 0.0)) throw InvalidArgument("cwt_ricker: scales must be positive");
  }
  const std::size_t n = s.size();
  Matrix<double> out(scales.size(), n);
  if (n == 0) return out;
  for (std::size_t r = 0; r < scales.size(); ++r) {
    const double a = scales[r];
    const auto half = static_cast<std::ptrdiff_t>(std::ceil(8.0 * a));
    std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
    const double gain = 1.0 / std::sqrt(a);
    for (std::ptrdiff_t t = -half; t <= half; ++t) {
      kernel[static_cast<std::size_t>(t + half)] =
          gain * ricker(static_cast<double>(t) / a);
    }
    const double mean =
        std::accumulate(kernel.begin(), kernel.end(), 0.0) / kernel.size();
    for (auto& v : kernel) v -= mean;

    auto row = out.row(r);
    for (std::size_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::ptrdiff_t t = -half; t <= half; ++t) {
        const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(b) - t;
        acc += kernel[static_cast<std::size_t>(t + half)] *
               s.samples[extension_index(i, n, PadMode::Symmetric)];
      }
      row[b] = acc;
    }
  }
  return out;
}

}  // namespace tfsep
