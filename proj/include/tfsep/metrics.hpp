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

#include <optional>
#include <span>

#include "tfsep/signal.hpp"

namespace tfsep {

/// Reference-based scores for one reconstruction. A metric that could not be
/// computed (e.g. input too short for STOI) is left empty.
struct MetricScores {
  std::optional<double> stoi;
  std::optional<double> si_sdr;  // dB
  std::optional<double> snr;     // dB
  std::optional<double> mse;
  double decomposition_time = 0.0;  // seconds
};

/// ||s - s_hat||^2 / n
double mse(std::span<const double> ref, std::span<const double> est);

/// 10 log10(||s||^2 / ||s - s_hat||^2). +inf when est == ref exactly.
double snr(std::span<const double> ref, std::span<const double> est);

/// Scale-invariant SDR. The reference is rescaled by
/// alpha = <s, s_hat> / ||s||^2 so that the residual is orthogonal to s.
/// Throws DataError for an all-zero reference; returns +inf when
/// alpha s == s_hat exactly and -inf when s_hat is orthogonal to s.
double si_sdr(std::span<const double> ref, std::span<const double> est);

/// Short-time objective intelligibility in [0, 1]. Both signals are
/// resampled to 10 kHz, silent frames (40 dB below the loudest clean frame)
/// are dropped, and one-third-octave envelopes over 384 ms segments are
/// correlated.
double stoi(std::span<const double> ref, std::span<const double> est, int rate);

}  // namespace tfsep
