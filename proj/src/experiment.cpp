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

#include "tfsep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "tfsep/error.hpp"
#include "tfsep/wav.hpp"
#include "tfsep/wavelet.hpp"

namespace tfsep {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// splitmix64 finaliser; used to derive independent seeds.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSpeakerStream = 1;
constexpr std::uint64_t kRecordingStream = 2;

TFRepresentation zeros_like(const TFRepresentation& tf) {
  TFRepresentation z = tf;
  std::visit(
      [](auto& bands) {
        for (auto& band : bands) std::fill(band.begin(), band.end(), 0.0);
      },
      z.bands);
  return z;
}

template <class F>
std::optional<double> try_metric(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::size_t floor_log2(std::size_t n) {
  std::size_t l = 0;
  while (n > 1) {
    n >>= 1;
    ++l;
  }
  return l;
}

std::vector<std::string> family_range(const std::string& prefix, int first,
                                      int last) {
  std::vector<std::string> out;
  for (int p = first; p <= last; ++p) out.push_back(prefix + std::to_string(p));
  return out;
}

std::vector<std::size_t> parse_levels(const json& j) {
  std::vector<std::size_t> levels;
  if (j.is_number_integer()) {
    const auto max = j.get<long long>();
    if (max < 1) throw InvalidArgument("grid: levels must be at least 1");
    for (long long l = 1; l <= max; ++l) levels.push_back(static_cast<std::size_t>(l));
  } else if (j.is_array()) {
    for (const auto& v : j) {
      const auto l = v.get<long long>();
      if (l < 1) throw InvalidArgument("grid: levels must be at least 1");
      levels.push_back(static_cast<std::size_t>(l));
    }
  } else {
    throw InvalidArgument("grid: 'levels' must be an integer or a list");
  }
  return levels;
}

WaveletGrid parse_wavelet_grid(const json& j) {
  WaveletGrid g;
  if (j.contains("families")) {
    g.families = j.at("families").get<std::vector<std::string>>();
  } else {
    g.families = default_grid().dwt->families;
  }
  for (const auto& f : g.families) lookup(f);  // reject unknown names early
  if (j.contains("levels")) g.levels = parse_levels(j.at("levels"));
  return g;
}

std::vector<std::size_t> levels_for(const WaveletGrid& g, std::size_t cap) {
  if (!g.levels.empty()) return g.levels;
  std::vector<std::size_t> out(cap);
  std::iota(out.begin(), out.end(), std::size_t{1});
  return out;
}

struct TrialResult {
  MetricScores scores;
  std::string error;
};

std::optional<double> mean_of(const std::vector<TrialResult>& results,
                              std::optional<double> MetricScores::*field) {
  double acc = 0.0;
  for (const auto& r : results) {
    const auto& v = r.scores.*field;
    if (!v) return std::nullopt;
    acc += *v;
  }
  return acc / static_cast<double>(results.size());
}

// Larger is better except for MSE and time; missing values sort last.
std::optional<double> sort_value(const ReportRow& row, SortKey key) {
  if (row.status != "ok") return std::nullopt;
  switch (key) {
    case SortKey::Stoi: return row.mean.stoi;
    case SortKey::SiSdr: return row.mean.si_sdr;
    case SortKey::Snr: return row.mean.snr;
    case SortKey::Mse: return row.mean.mse ? std::optional(-*row.mean.mse) : std::nullopt;
    case SortKey::Time: return -row.mean.decomposition_time;
    case SortKey::None: break;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json json_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

}  // namespace

SpeakerCorpus::SpeakerCorpus(std::vector<Speaker> speakers)
    : speakers_(std::move(speakers)) {}

SpeakerCorpus SpeakerCorpus::from_directory(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw IoError("corpus directory '" + root.string() + "' does not exist");
  }
  std::vector<Speaker> speakers;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    Speaker sp{entry.path().filename().string(), {}};
    for (const auto& f : fs::directory_iterator(entry.path())) {
      auto ext = f.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (f.is_regular_file() && ext == ".wav") sp.recordings.push_back(f.path());
    }
    if (sp.recordings.empty()) continue;
    std::sort(sp.recordings.begin(), sp.recordings.end());
    speakers.push_back(std::move(sp));
  }
  std::sort(speakers.begin(), speakers.end(),
            [](const Speaker& a, const Speaker& b) { return a.id < b.id; });
  if (speakers.empty()) {
    throw DataError("corpus '" + root.string() + "' has no speaker directories with .wav files");
  }
  return SpeakerCorpus(std::move(speakers));
}

Signal SpeakerCorpus::load(std::size_t speaker, std::size_t recording) const {
  return load_wav(speakers_.at(speaker).recordings.at(recording));
}

Mixture mix_sources(std::vector<Signal> sources, std::vector<std::string> speaker_ids,
                    std::uint64_t seed) {
  if (sources.empty()) throw InvalidArgument("mix_sources: no sources");
  const int rate = sources.front().rate;
  std::size_t len = 0;
  for (const auto& s : sources) {
    if (s.rate != rate) {
      throw DataError("mix_sources: sample rates differ (" + std::to_string(rate) +
                      " vs " + std::to_string(s.rate) + " Hz)");
    }
    len = std::max(len, s.size());
  }
  if (len == 0) throw InvalidArgument("mix_sources: sources are empty");
  Mixture mix;
  mix.mixture = Signal{std::vector<double>(len, 0.0), rate};
  for (auto& s : sources) {
    s.samples.resize(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) mix.mixture.samples[i] += s.samples[i];
  }
  mix.sources = std::move(sources);
  if (speaker_ids.empty()) {
    for (std::size_t i = 0; i < mix.sources.size(); ++i) {
      speaker_ids.push_back("source" + std::to_string(i));
    }
  }
  mix.speaker_ids = std::move(speaker_ids);
  mix.seed = seed;
  return mix;
}

std::uint64_t mixture_seed(std::uint64_t base_seed, std::size_t index) {
  return mix64(base_seed ^ mix64(static_cast<std::uint64_t>(index)));
}

Mixture make_mixture(const SpeakerCorpus& corpus, std::size_t speakers,
                     std::uint64_t seed, bool resample_mismatched) {
  const std::size_t available = corpus.speakers().size();
  if (speakers < 1) throw InvalidArgument("make_mixture: need at least one speaker");
  if (speakers > available) {
    throw DataError("make_mixture: corpus has " + std::to_string(available) +
                    " speakers, " + std::to_string(speakers) + " requested");
  }
  std::mt19937_64 pick_speaker(mix64(seed + kSpeakerStream));
  std::mt19937_64 pick_recording(mix64(seed + kRecordingStream));

  std::vector<std::size_t> order(available);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < speakers; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick_speaker() % (available - i));
    std::swap(order[i], order[j]);
  }

  std::vector<Signal> sources;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < speakers; ++i) {
    const auto& sp = corpus.speakers()[order[i]];
    const std::size_t r = static_cast<std::size_t>(pick_recording() % sp.recordings.size());
    Signal s = corpus.load(order[i], r);
    if (!sources.empty() && s.rate != sources.front().rate) {
      if (!resample_mismatched) {
        throw DataError("make_mixture: '" + sp.recordings[r].string() + "' is " +
                        std::to_string(s.rate) + " Hz but the target is " +
                        std::to_string(sources.front().rate) + " Hz");
      }
      s = resample(s, sources.front().rate);
    }
    sources.push_back(std::move(s));
    ids.push_back(sp.id);
  }
  return mix_sources(std::move(sources), std::move(ids), seed);
}

MetricScores run_ibm_trial(const Mixture& mix, const DecompositionConfig& cfg) {
  if (mix.sources.empty()) throw InvalidArgument("run_ibm_trial: mixture has no sources");
  const std::size_t target = mix.target_index;
  const Signal& clean = mix.sources.at(target);

  const auto t0 = std::chrono::steady_clock::now();
  const TFRepresentation m = decompose(mix.mixture, cfg);
  const auto t1 = std::chrono::steady_clock::now();

  const TFRepresentation s = decompose(clean, cfg);
  std::vector<TFRepresentation> others;
  for (std::size_t i = 0; i < mix.sources.size(); ++i) {
    if (i != target) others.push_back(decompose(mix.sources[i], cfg));
  }
  const TFRepresentation n = others.empty() ? zeros_like(s) : sum(others);
  const Mask ibm = ideal_binary_mask(s, n);
  const TFRepresentation masked = apply_mask(m, ibm);

  const auto t2 = std::chrono::steady_clock::now();
  const Signal estimate = reconstruct(masked);
  const auto t3 = std::chrono::steady_clock::now();

  MetricScores out;
  out.decomposition_time = std::chrono::duration<double>((t1 - t0) + (t3 - t2)).count();
  const auto& ref = clean.samples;
  const auto& est = estimate.samples;
  out.stoi = try_metric([&] { return stoi(ref, est, clean.rate); });
  out.si_sdr = try_metric([&] { return si_sdr(ref, est); });
  out.snr = try_metric([&] { return snr(ref, est); });
  out.mse = try_metric([&] { return mse(ref, est); });
  return out;
}

GridSpec default_grid() {
  GridSpec g;
  g.stft = StftGrid{{WindowKind::Hann, WindowKind::Rectangular},
                    {5, 10, 16, 25, 32, 50, 100, 120},
                    {0.25, 0.5, 0.75}};
  WaveletGrid w;
  w.families.push_back("haar");
  for (auto& f : family_range("db", 2, 20)) w.families.push_back(f);
  for (auto& f : family_range("sym", 2, 20)) w.families.push_back(f);
  for (auto& f : family_range("coif", 1, 17)) w.families.push_back(f);
  g.dwt = w;
  g.wpt = w;
  return g;
}

GridSpec parse_grid(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("grid: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("grid: top level must be an object");
  GridSpec g;
  try {
    if (j.contains("stft")) {
      const auto& s = j.at("stft");
      StftGrid sg;
      for (const auto& w : s.value("windows", json::array({"hann"}))) {
        sg.windows.push_back(parse_window_kind(w.get<std::string>()));
      }
      sg.sizes_ms = s.at("sizes_ms").get<std::vector<double>>();
      sg.hop_fractions = s.value("hop_fractions", std::vector<double>{0.5});
      g.stft = std::move(sg);
    }
    if (j.contains("wavelet")) g.dwt = parse_wavelet_grid(j.at("wavelet"));
    if (j.contains("wpt")) g.wpt = parse_wavelet_grid(j.at("wpt"));
    if (j.contains("max_levels")) g.max_levels = j.at("max_levels").get<std::size_t>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("grid: ") + e.what());
  }
  if (!g.stft && !g.dwt && !g.wpt) {
    throw InvalidArgument("grid: needs at least one of 'stft', 'wavelet', 'wpt'");
  }
  return g;
}

GridSpec load_grid_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_grid(text.str());
}

std::vector<DecompositionConfig> expand_grid(const GridSpec& grid, int rate,
                                             std::size_t min_signal_len) {
  std::vector<DecompositionConfig> out;
  if (grid.stft) {
    for (auto w : grid.stft->windows) {
      for (double ms : grid.stft->sizes_ms) {
        for (double hop : grid.stft->hop_fractions) {
          out.push_back({StftConfig::from_ms(w, ms, hop, rate)});
        }
      }
    }
  }
  const std::size_t cap = std::min(grid.max_levels, floor_log2(min_signal_len));
  if (grid.dwt) {
    for (const auto& f : grid.dwt->families) {
      for (auto l : levels_for(*grid.dwt, cap)) out.push_back({DwtConfig{f, l}});
    }
  }
  if (grid.wpt) {
    for (const auto& f : grid.wpt->families) {
      for (auto l : levels_for(*grid.wpt, cap)) out.push_back({WptConfig{f, l}});
    }
  }
  return out;
}

SortKey parse_sort_key(std::string_view text) {
  if (text == "none") return SortKey::None;
  if (text == "stoi") return SortKey::Stoi;
  if (text == "si-sdr" || text == "si_sdr") return SortKey::SiSdr;
  if (text == "snr") return SortKey::Snr;
  if (text == "mse") return SortKey::Mse;
  if (text == "time") return SortKey::Time;
  throw InvalidArgument("unknown sort key '" + std::string(text) +
                        "' (expected none, stoi, si-sdr, snr, mse, time)");
}

ExperimentReport evaluate_configs(std::span<const Mixture> mixtures,
                                  std::span<const DecompositionConfig> configs,
                                  std::uint64_t seed, std::size_t jobs,
                                  SortKey sort) {
  if (mixtures.empty()) throw InvalidArgument("evaluate_configs: no mixtures");
  const std::size_t n_mix = mixtures.size();
  const std::size_t tasks = configs.size() * n_mix;
  std::vector<TrialResult> results(tasks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const auto& cfg = configs[t / n_mix];
      const auto& mix = mixtures[t % n_mix];
      try {
        results[t].scores = run_ibm_trial(mix, cfg);
      } catch (const std::exception& e) {
        results[t].error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  ExperimentReport report;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    ReportRow row;
    row.decomposition = configs[c].method();
    row.params = configs[c].params();
    row.n_mixtures = n_mix;
    row.seed = seed;
    const std::vector<TrialResult> slice(results.begin() + c * n_mix,
                                         results.begin() + (c + 1) * n_mix);
    const auto failed = std::find_if(slice.begin(), slice.end(),
                                     [](const TrialResult& r) { return !r.error.empty(); });
    if (failed != slice.end()) {
      row.status = "failed: " + failed->error;
    } else {
      row.mean.stoi = mean_of(slice, &MetricScores::stoi);
      row.mean.si_sdr = mean_of(slice, &MetricScores::si_sdr);
      row.mean.snr = mean_of(slice, &MetricScores::snr);
      row.mean.mse = mean_of(slice, &MetricScores::mse);
      double t = 0.0;
      for (const auto& r : slice) t += r.scores.decomposition_time;
      row.mean.decomposition_time = t / static_cast<double>(n_mix);
    }
    report.rows.push_back(std::move(row));
  }

  if (sort != SortKey::None) {
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [sort](const ReportRow& a, const ReportRow& b) {
                       const auto va = sort_value(a, sort);
                       const auto vb = sort_value(b, sort);
                       if (!vb) return va.has_value();
                       if (!va) return false;
                       return *va > *vb;
                     });
  }
  return report;
}

ExperimentReport grid_search(const SpeakerCorpus& corpus, const GridSpec& grid,
                             const ExperimentOptions& options) {
  if (options.mixtures == 0) throw InvalidArgument("grid_search: mixtures must be positive");
  std::vector<Mixture> mixtures;
  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < options.mixtures; ++i) {
    mixtures.push_back(make_mixture(corpus, options.speakers,
                                    mixture_seed(options.seed, i),
                                    options.resample_mismatched));
    min_len = std::min(min_len, mixtures.back().mixture.size());
  }
  const int rate = mixtures.front().mixture.rate;
  for (const auto& m : mixtures) {
    if (m.mixture.rate != rate) {
      throw DataError("grid_search: mixtures have different sample rates");
    }
  }
  const auto configs = expand_grid(grid, rate, min_len);
  if (configs.empty()) throw InvalidArgument("grid_search: grid is empty");
  return evaluate_configs(mixtures, configs, options.seed, options.jobs, options.sort);
}

std::string format_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json rows = json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"decomposition", r.decomposition},
                      {"params", r.params},
                      {"STOI", json_number(r.mean.stoi)},
                      {"SI-SDR", json_number(r.mean.si_sdr)},
                      {"SNR", json_number(r.mean.snr)},
                      {"MSE", json_number(r.mean.mse)},
                      {"time_s", r.mean.decomposition_time},
                      {"n_mixtures", r.n_mixtures},
                      {"seed", r.seed},
                      {"status", r.status}});
    }
    return rows.dump(2) + "\n";
  }
  std::string out = "decomposition,params,STOI,SI-SDR,SNR,MSE,time_s,n_mixtures,status\n";
  for (const auto& r : report.rows) {
    out += csv_text(r.decomposition) + ',' + csv_text(r.params) + ',' +
           csv_cell(r.mean.stoi) + ',' + csv_cell(r.mean.si_sdr) + ',' +
           csv_cell(r.mean.snr) + ',' + csv_cell(r.mean.mse) + ',' +
           format_number(r.mean.decomposition_time) + ',' +
           std::to_string(r.n_mixtures) + ',' + csv_text(r.status) + '\n';
  }
  return out;
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_report(report, format);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace tfsep
