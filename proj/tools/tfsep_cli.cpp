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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfsep/error.hpp"
#include "tfsep/experiment.hpp"
#include "tfsep/fourier.hpp"
#include "tfsep/masking.hpp"
#include "tfsep/metrics.hpp"
#include "tfsep/wav.hpp"
#include "tfsep/wavelet.hpp"

namespace fs = std::filesystem;
using namespace tfsep;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct StftOptions {
  std::string window = "hann";
  double win_ms = 32.0;
  double hop_ms = 16.0;
  std::size_t fft = 0;  // 0: next power of two of the window

  StftConfig resolve(int rate) const {
    StftConfig cfg;
    cfg.window = parse_window_kind(window);
    cfg.win_size = static_cast<std::size_t>(std::floor(win_ms * rate / 1000.0 + 1e-9));
    cfg.hop = static_cast<std::size_t>(std::llround(hop_ms * rate / 1000.0));
    cfg.fft_size = fft != 0 ? fft : next_power_of_two(cfg.win_size);
    cfg.validate();
    return cfg;
  }
};

struct WaveletOptions {
  std::string wavelet = "sym8";
  std::size_t levels = 6;
  std::string mode = "periodization";
};

void add_stft_options(CLI::App* cmd, StftOptions& o) {
  cmd->add_option("--window", o.window, "hann or rect")->capture_default_str();
  cmd->add_option("--win-ms", o.win_ms, "window length in ms")->capture_default_str();
  cmd->add_option("--hop-ms", o.hop_ms, "hop in ms")->capture_default_str();
  cmd->add_option("--fft", o.fft, "FFT size (power of two, >= window)");
}

void add_wavelet_options(CLI::App* cmd, WaveletOptions& o) {
  cmd->add_option("--wavelet", o.wavelet, "registry name, e.g. db4, sym8")->capture_default_str();
  cmd->add_option("--levels", o.levels, "decomposition levels")->capture_default_str();
  cmd->add_option("--mode", o.mode, "zero, periodization or symmetric")->capture_default_str();
}

void write_rows(const std::vector<std::vector<double>>& rows, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<double> parse_scales(const std::string& spec) {
  std::vector<double> scales;
  if (const auto colon = spec.find(':'); colon != std::string::npos) {
    const double lo = std::stod(spec.substr(0, colon));
    const double hi = std::stod(spec.substr(colon + 1));
    for (double a = lo; a <= hi + 1e-9; a += 1.0) scales.push_back(a);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) scales.push_back(std::stod(item));
  }
  if (scales.empty()) throw InvalidArgument("no scales in '" + spec + "'");
  return scales;
}

nlohmann::json metric_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return ReportFormat::Csv;
  if (f == "json") return ReportFormat::Json;
  throw InvalidArgument("unknown report format '" + f + "' (expected csv or json)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency decompositions and oracle-mask speaker separation"};
  app.require_subcommand(1);

  // decompose
  std::string in_path;
  std::string out_path;
  std::string method = "stft";
  StftOptions stft_opt;
  WaveletOptions wav_opt;
  auto* decompose_cmd = app.add_subcommand("decompose", "write transform coefficients as CSV");
  decompose_cmd->add_option("--in", in_path, "input WAV")->required();
  decompose_cmd->add_option("--method", method, "stft, dwt or wpt")->capture_default_str();
  add_stft_options(decompose_cmd, stft_opt);
  add_wavelet_options(decompose_cmd, wav_opt);
  decompose_cmd->add_option("--out", out_path, "output CSV")->required();

  // spectrogram
  std::optional<std::string> csv_path;
  auto* spectrogram_cmd = app.add_subcommand("spectrogram", "STFT magnitude heat map (PGM)");
  spectrogram_cmd->add_option("--in", in_path, "input WAV")->required();
  add_stft_options(spectrogram_cmd, stft_opt);
  spectrogram_cmd->add_option("--out", out_path, "output PGM")->required();
  spectrogram_cmd->add_option("--csv", csv_path, "also write the magnitudes as CSV");

  // scaleogram
  std::string scale_method = "dwt";
  std::string scales_spec = "1:64";
  auto* scaleogram_cmd = app.add_subcommand("scaleogram", "wavelet heat map (PGM)");
  scaleogram_cmd->add_option("--in", in_path, "input WAV")->required();
  scaleogram_cmd->add_option("--method", scale_method, "dwt, wpt or cwt")->capture_default_str();
  add_wavelet_options(scaleogram_cmd, wav_opt);
  scaleogram_cmd->add_option("--scales", scales_spec, "CWT scales: 'lo:hi' or a comma list")
      ->capture_default_str();
  scaleogram_cmd->add_option("--out", out_path, "output PGM")->required();
  scaleogram_cmd->add_option("--csv", csv_path, "also write the magnitudes as CSV");

  // metrics
  std::string ref_path;
  std::string deg_path;
  bool want_stoi = false;
  bool want_si_sdr = false;
  bool want_snr = false;
  bool want_mse = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "compare a degraded signal to a reference");
  metrics_cmd->add_option("--ref", ref_path, "clean reference WAV")->required();
  metrics_cmd->add_option("--deg", deg_path, "degraded WAV")->required();
  metrics_cmd->add_flag("--stoi", want_stoi);
  metrics_cmd->add_flag("--si-sdr", want_si_sdr);
  metrics_cmd->add_flag("--snr", want_snr);
  metrics_cmd->add_flag("--mse", want_mse);

  // mix
  std::string corpus_dir;
  std::size_t speakers = 2;
  std::uint64_t seed = 0;
  std::optional<std::string> sources_dir;
  bool resample_mismatched = false;
  auto* mix_cmd = app.add_subcommand("mix", "draw a seeded multi-speaker mixture");
  mix_cmd->add_option("--corpus", corpus_dir, "directory with one folder per speaker")->required();
  mix_cmd->add_option("--speakers", speakers, "speakers per mixture")->capture_default_str();
  mix_cmd->add_option("--seed", seed)->capture_default_str();
  mix_cmd->add_option("--out", out_path, "mixture WAV")->required();
  mix_cmd->add_option("--sources-dir", sources_dir, "also write the padded sources here");
  mix_cmd->add_flag("--resample", resample_mismatched, "resample recordings to the target's rate");

  // experiment
  std::size_t mixtures = 10;
  std::string grid_arg = "default";
  std::string format = "csv";
  std::size_t jobs = 1;
  std::string sort = "stoi";
  std::size_t max_levels = 12;
  bool full_levels = false;
  auto* experiment_cmd = app.add_subcommand("experiment", "grid search over decompositions");
  experiment_cmd->add_option("--corpus", corpus_dir, "directory with one folder per speaker")
      ->required();
  experiment_cmd->add_option("--mixtures", mixtures)->capture_default_str();
  experiment_cmd->add_option("--speakers", speakers)->capture_default_str();
  experiment_cmd->add_option("--seed", seed)->capture_default_str();
  experiment_cmd->add_option("--grid", grid_arg, "'default' or a JSON grid file")
      ->capture_default_str();
  experiment_cmd->add_option("--out", out_path, "report path")->required();
  experiment_cmd->add_option("--format", format, "csv or json")->capture_default_str();
  experiment_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  experiment_cmd->add_option("--sort", sort, "none, stoi, si-sdr, snr, mse or time")
      ->capture_default_str();
  experiment_cmd->add_option("--max-levels", max_levels, "cap on wavelet levels")
      ->capture_default_str();
  experiment_cmd->add_flag("--full-levels", full_levels,
                           "allow up to floor(log2 n) wavelet levels");
  experiment_cmd->add_flag("--resample", resample_mismatched,
                           "resample recordings to the target's rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*decompose_cmd) {
      const Signal s = load_wav(in_path);
      if (method == "stft") {
        write_csv(magnitude(stft(s, stft_opt.resolve(s.rate)).coeffs), out_path);
      } else if (method == "dwt") {
        const auto c = wavedec(s, lookup(wav_opt.wavelet), wav_opt.levels,
                               parse_pad_mode(wav_opt.mode));
        std::vector<std::vector<double>> rows{c.approx};
        for (std::size_t l = c.levels; l >= 1; --l) rows.push_back(c.detail(l));
        write_rows(rows, out_path);
      } else if (method == "wpt") {
        write_csv(wpt(s, lookup(wav_opt.wavelet), wav_opt.levels, parse_pad_mode(wav_opt.mode))
                      .leaves,
                  out_path);
      } else {
        throw InvalidArgument("unknown method '" + method + "' (expected stft, dwt or wpt)");
      }
    } else if (*spectrogram_cmd) {
      const Signal s = load_wav(in_path);
      const auto m = magnitude(stft(s, stft_opt.resolve(s.rate)).coeffs);
      export_heatmap(m, out_path, csv_path ? std::optional<fs::path>(*csv_path) : std::nullopt);
    } else if (*scaleogram_cmd) {
      const Signal s = load_wav(in_path);
      Matrix<double> m;
      if (scale_method == "dwt") {
        m = dwt_scaleogram(wavedec(s, lookup(wav_opt.wavelet), wav_opt.levels,
                                   parse_pad_mode(wav_opt.mode)));
      } else if (scale_method == "wpt") {
        m = wpt(s, lookup(wav_opt.wavelet), wav_opt.levels, parse_pad_mode(wav_opt.mode)).leaves;
      } else if (scale_method == "cwt") {
        // Largest scale last, so the bottom image row is the lowest frequency.
        auto scales = parse_scales(scales_spec);
        std::sort(scales.rbegin(), scales.rend());
        m = cwt_ricker(s, scales);
      } else {
        throw InvalidArgument("unknown method '" + scale_method + "' (expected dwt, wpt or cwt)");
      }
      export_heatmap(m, out_path, csv_path ? std::optional<fs::path>(*csv_path) : std::nullopt);
    } else if (*metrics_cmd) {
      const Signal ref = load_wav(ref_path);
      const Signal deg = load_wav(deg_path);
      if (ref.rate != deg.rate) {
        throw DataError("sample rates differ (" + std::to_string(ref.rate) + " vs " +
                        std::to_string(deg.rate) + " Hz)");
      }
      if (ref.size() != deg.size()) {
        throw DataError("lengths differ (" + std::to_string(ref.size()) + " vs " +
                        std::to_string(deg.size()) + " samples)");
      }
      const bool all = !(want_stoi || want_si_sdr || want_snr || want_mse);
      nlohmann::json out = nlohmann::json::object();
      if (all || want_stoi) out["STOI"] = stoi(ref.samples, deg.samples, ref.rate);
      if (all || want_si_sdr) out["SI-SDR"] = metric_json(si_sdr(ref.samples, deg.samples));
      if (all || want_snr) out["SNR"] = metric_json(snr(ref.samples, deg.samples));
      if (all || want_mse) out["MSE"] = mse(ref.samples, deg.samples);
      std::cout << out.dump() << '\n';
    } else if (*mix_cmd) {
      const auto corpus = SpeakerCorpus::from_directory(corpus_dir);
      const auto mix = make_mixture(corpus, speakers, seed, resample_mismatched);
      save_wav(mix.mixture, out_path);
      if (sources_dir) {
        fs::create_directories(*sources_dir);
        for (std::size_t i = 0; i < mix.sources.size(); ++i) {
          save_wav(mix.sources[i], fs::path(*sources_dir) /
                                       ("source" + std::to_string(i) + "_" +
                                        mix.speaker_ids[i] + ".wav"));
        }
      }
      std::cout << "target: " << mix.speaker_ids.front() << "\n";
    } else if (*experiment_cmd) {
      GridSpec grid = grid_arg == "default" ? default_grid() : load_grid_file(grid_arg);
      grid.max_levels = full_levels ? std::numeric_limits<std::size_t>::max() : max_levels;
      ExperimentOptions opt;
      opt.mixtures = mixtures;
      opt.speakers = speakers;
      opt.seed = seed;
      opt.jobs = jobs;
      opt.sort = parse_sort_key(sort);
      opt.resample_mismatched = resample_mismatched;
      const auto fmt = parse_format(format);
      const auto corpus = SpeakerCorpus::from_directory(corpus_dir);
      emit_report(grid_search(corpus, grid, opt), fmt, out_path);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
