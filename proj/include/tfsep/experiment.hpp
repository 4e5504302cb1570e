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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfsep/fourier.hpp"
#include "tfsep/masking.hpp"
#include "tfsep/metrics.hpp"
#include "tfsep/signal.hpp"

namespace tfsep {

struct Speaker {
  std::string id;
  std::vector<std::filesystem::path> recordings;
};

/// Recordings grouped by speaker. Files are only decoded when a mixture
/// needs them.
class SpeakerCorpus {
 public:
  SpeakerCorpus() = default;
  explicit SpeakerCorpus(std::vector<Speaker> speakers);

  /// One speaker per sub-directory of `root`, holding *.wav files. Speakers
  /// and recordings are sorted by name so the layout is deterministic.
  static SpeakerCorpus from_directory(const std::filesystem::path& root);

  const std::vector<Speaker>& speakers() const { return speakers_; }
  Signal load(std::size_t speaker, std::size_t recording) const;

 private:
  std::vector<Speaker> speakers_;
};

struct Mixture {
  Signal mixture;
  std::vector<Signal> sources;  // zero-padded to a common length
  std::size_t target_index = 0;
  std::vector<std::string> speaker_ids;
  std::uint64_t seed = 0;
};

/// Zero-pads the sources to the longest one and sums them. Source 0 is the
/// target.
Mixture mix_sources(std::vector<Signal> sources,
                    std::vector<std::string> speaker_ids = {},
                    std::uint64_t seed = 0);

/// Picks `speakers` distinct speakers and one recording each at random
/// (seeded), the first being the target. Recordings at a different rate than
/// the target are an error unless `resample_mismatched` is set.
Mixture make_mixture(const SpeakerCorpus& corpus, std::size_t speakers,
                     std::uint64_t seed, bool resample_mismatched = false);

/// Seed of the i-th mixture in a fixed mixture set.
std::uint64_t mixture_seed(std::uint64_t base_seed, std::size_t index);

/// Ideal-binary-mask separation of the target: decompose the mixture and
/// every source, mask the mixture where the target dominates the summed
/// interference, invert, and score against the clean target.
/// decomposition_time covers decomposing and reconstructing the mixture.
MetricScores run_ibm_trial(const Mixture& mix, const DecompositionConfig& cfg);

struct StftGrid {
  std::vector<WindowKind> windows;
  std::vector<double> sizes_ms;
  std::vector<double> hop_fractions;
};

struct WaveletGrid {
  std::vector<std::string> families;
  /// Empty means 1 .. min(max_levels, floor(log2 of the shortest mixture)).
  std::vector<std::size_t> levels;
};

struct GridSpec {
  std::optional<StftGrid> stft;
  std::optional<WaveletGrid> dwt;
  std::optional<WaveletGrid> wpt;
  std::size_t max_levels = 12;
};

/// Hann/rect x {5,10,16,25,32,50,100,120} ms x {25,50,75}% hop, and DWT/WPT
/// over haar, db2..db20, sym2..sym20 and coif1..coif17.
GridSpec default_grid();

/// JSON grid file: {"stft": {"windows", "sizes_ms", "hop_fractions"},
/// "wavelet": {"families", "levels"}, "wpt": {"families", "levels"}}.
/// "levels" is a list of level counts or a single maximum.
GridSpec parse_grid(const std::string& json_text);
GridSpec load_grid_file(const std::filesystem::path& path);

/// Concrete configurations of a grid for signals of at least
/// `min_signal_len` samples at `rate` Hz.
std::vector<DecompositionConfig> expand_grid(const GridSpec& grid, int rate,
                                             std::size_t min_signal_len);

enum class SortKey { None, Stoi, SiSdr, Snr, Mse, Time };
SortKey parse_sort_key(std::string_view text);

struct ReportRow {
  std::string decomposition;
  std::string params;
  MetricScores mean;  // averaged over n_mixtures; empty when not computable
  std::size_t n_mixtures = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "failed: <reason>"
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
};

struct ExperimentOptions {
  std::size_t mixtures = 10;
  std::size_t speakers = 2;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  SortKey sort = SortKey::Stoi;
  bool resample_mismatched = false;
};

/// Evaluates every configuration on every mixture (in parallel when
/// jobs > 1; the result does not depend on scheduling) and averages.
ExperimentReport evaluate_configs(std::span<const Mixture> mixtures,
                                  std::span<const DecompositionConfig> configs,
                                  std::uint64_t seed, std::size_t jobs,
                                  SortKey sort);

/// Generates the mixture set once from the seed, expands the grid for it and
/// runs evaluate_configs.
ExperimentReport grid_search(const SpeakerCorpus& corpus, const GridSpec& grid,
                             const ExperimentOptions& options);

enum class ReportFormat { Csv, Json };

/// CSV columns: decomposition, params, STOI, SI-SDR, SNR, MSE, time_s,
/// n_mixtures, status. Infinite values are written as "inf"/"-inf" and
/// missing ones as an empty cell (CSV) or null (JSON). JSON output is an
/// array of row objects with the same keys plus "seed".
std::string format_report(const ExperimentReport& report, ReportFormat format);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace tfsep
