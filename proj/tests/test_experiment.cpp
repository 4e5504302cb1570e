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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "tfsep/error.hpp"
#include "tfsep/experiment.hpp"
#include "tfsep/wav.hpp"

using namespace tfsep;
namespace fs = std::filesystem;

namespace {

// Three "speakers" of modulated noise at different pitches, a few short
// recordings each.
fs::path synthetic_corpus() {
  const fs::path root = fs::temp_directory_path() / "tfsep_synthetic_corpus";
  if (fs::exists(root / "done")) return root;
  fs::remove_all(root);
  const int rate = 8000;
  const double pitch[] = {140.0, 220.0, 330.0};
  for (int sp = 0; sp < 3; ++sp) {
    const fs::path dir = root / ("spk" + std::to_string(sp));
    fs::create_directories(dir);
    for (int r = 0; r < 3; ++r) {
      const std::size_t n = 6000 + 1000 * static_cast<std::size_t>(r + sp);
      auto noise = tfsep::testing::random_vector(n, 100 * sp + r, 0.05);
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double env = 0.5 + 0.5 * std::sin(2 * M_PI * (3.0 + sp) * t);
        x[i] = env * (0.3 * std::sin(2 * M_PI * pitch[sp] * (1 + r * 0.1) * t) + noise[i]);
      }
      save_wav(Signal{x, rate}, dir / ("r" + std::to_string(r) + ".wav"));
    }
  }
  std::ofstream(root / "done") << "ok";
  return root;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("speaker corpus from a directory") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  REQUIRE(corpus.speakers().size() == 3);
  CHECK(corpus.speakers()[0].id == "spk0");
  CHECK(corpus.speakers()[2].recordings.size() == 3);
  CHECK(corpus.load(1, 0).rate == 8000);
  CHECK_THROWS_AS(SpeakerCorpus::from_directory("/nonexistent/corpus"), IoError);

  const auto real = SpeakerCorpus::from_directory(std::string(TFSEP_TEST_DATA_DIR) + "/corpus");
  CHECK(real.speakers().size() == 9);
}

TEST_CASE("mix_sources") {
  const auto mix = mix_sources({Signal{{1, 2, 3}, 8000}, Signal{{10, 20}, 8000}});
  CHECK(mix.mixture.samples == std::vector<double>{11, 22, 3});
  CHECK(mix.sources[1].samples == std::vector<double>{10, 20, 0});
  CHECK(mix.target_index == 0);
  CHECK_THROWS_AS(mix_sources({Signal{{1}, 8000}, Signal{{1}, 16000}}), DataError);
  CHECK_THROWS_AS(mix_sources({}), InvalidArgument);
}

TEST_CASE("make_mixture") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  const auto a = make_mixture(corpus, 2, 42);
  const auto b = make_mixture(corpus, 2, 42);
  CHECK(a.mixture.samples == b.mixture.samples);
  CHECK(a.speaker_ids == b.speaker_ids);
  CHECK(a.speaker_ids[0] != a.speaker_ids[1]);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = make_mixture(corpus, 3, seed);
    CHECK(m.speaker_ids.size() == 3);
    CHECK(m.speaker_ids[0] != m.speaker_ids[1]);
    CHECK(m.speaker_ids[1] != m.speaker_ids[2]);
    CHECK(m.speaker_ids[0] != m.speaker_ids[2]);
    double bound = 0.0;
    for (const auto& s : m.sources) {
      CHECK(s.size() == m.mixture.size());
      bound += l2_norm(s.samples);
    }
    CHECK(l2_norm(m.mixture.samples) <= bound + 1e-12);
  }
  CHECK_THROWS_AS(make_mixture(corpus, 4, 0), DataError);
  CHECK(mixture_seed(7, 0) != mixture_seed(7, 1));
}

TEST_CASE("make_mixture with mismatched rates") {
  const fs::path root = fs::temp_directory_path() / "tfsep_mixed_rates";
  fs::remove_all(root);
  fs::create_directories(root / "a");
  fs::create_directories(root / "b");
  save_wav(Signal{tfsep::testing::random_vector(4000, 1, 0.1), 8000}, root / "a" / "x.wav");
  save_wav(Signal{tfsep::testing::random_vector(8000, 2, 0.1), 16000}, root / "b" / "y.wav");
  const auto corpus = SpeakerCorpus::from_directory(root);
  CHECK_THROWS_AS(make_mixture(corpus, 2, 0), DataError);
  const auto mix = make_mixture(corpus, 2, 0, true);
  CHECK(mix.mixture.rate == mix.sources[0].rate);
  fs::remove_all(root);
}

TEST_CASE("run_ibm_trial without interference recovers the target") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  const Signal s = corpus.load(0, 1);
  const auto single = mix_sources({s});
  for (const DecompositionConfig& cfg :
       {DecompositionConfig{StftConfig::from_ms(WindowKind::Hann, 50, 0.5, 8000)},
        DecompositionConfig{StftConfig::from_ms(WindowKind::Rectangular, 16, 0.75, 8000)},
        DecompositionConfig{DwtConfig{"sym8", 6}}, DecompositionConfig{WptConfig{"db4", 5}}}) {
    const auto r = run_ibm_trial(single, cfg);
    INFO(cfg.method() << " " << cfg.params());
    REQUIRE(r.stoi);
    CHECK(std::abs(*r.stoi - 1.0) < 1e-6);
    CHECK(*r.mse < 1e-20);
    CHECK(*r.si_sdr > 100.0);
    CHECK(r.decomposition_time >= 0.0);
  }
}

TEST_CASE("the ideal mask improves on the unprocessed mixture") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  const DecompositionConfig cfg{WptConfig{"sym8", 5}};
  double masked = 0.0;
  double unprocessed = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto mix = make_mixture(corpus, 2, mixture_seed(3, i));
    masked += *run_ibm_trial(mix, cfg).si_sdr;
    unprocessed += si_sdr(mix.sources[0].samples, mix.mixture.samples);
  }
  CHECK(masked > unprocessed);
}

TEST_CASE("grid definitions") {
  const auto g = default_grid();
  const auto configs = expand_grid(g, 16000, 100000);
  std::size_t stft = 0;
  std::size_t dwt = 0;
  std::size_t wpt = 0;
  for (const auto& c : configs) {
    const auto m = c.method();
    (m == "stft" ? stft : m == "dwt" ? dwt : wpt)++;
  }
  CHECK(stft == 2 * 8 * 3);
  CHECK(g.dwt->families.size() == 1 + 19 + 19 + 17);
  CHECK(dwt == g.dwt->families.size() * 12);
  CHECK(wpt == dwt);

  // Levels are capped by the shortest signal.
  const auto short_cfgs = expand_grid(g, 16000, 1000);
  CHECK(short_cfgs.size() == 48 + 2 * 56 * 9);

  GridSpec full = g;
  full.max_levels = 64;
  CHECK(expand_grid(full, 16000, 1 << 16).size() == 48 + 2 * 56 * 16);
}

TEST_CASE("grid files") {
  const auto g = parse_grid(R"({
    "stft": {"windows": ["hann", "rect"], "sizes_ms": [32, 50], "hop_fractions": [0.5]},
    "wavelet": {"families": ["sym8", "db4"], "levels": [3, 6]},
    "wpt": {"families": ["sym8"], "levels": 2}
  })");
  REQUIRE(g.stft);
  CHECK(g.stft->windows.size() == 2);
  CHECK(g.dwt->levels == std::vector<std::size_t>{3, 6});
  CHECK(g.wpt->levels == std::vector<std::size_t>{1, 2});
  CHECK(expand_grid(g, 16000, 50000).size() == 4 + 4 + 2);

  const auto only_wpt = parse_grid(R"({"wpt": {"families": ["haar"]}})");
  CHECK_FALSE(only_wpt.stft);
  CHECK(expand_grid(only_wpt, 8000, 4096).size() == 12);

  CHECK_THROWS_AS(parse_grid("{not json"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid("{}"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid(R"({"wavelet": {"families": ["nope"]}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid(R"({"stft": {"windows": ["hann"]}})"), InvalidArgument);
  CHECK_THROWS_AS(load_grid_file("/nonexistent/grid.json"), IoError);
}

TEST_CASE("evaluate_configs") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  std::vector<Mixture> mixes;
  for (std::size_t i = 0; i < 3; ++i) mixes.push_back(make_mixture(corpus, 2, mixture_seed(1, i)));
  const std::vector<DecompositionConfig> configs{
      {StftConfig::from_ms(WindowKind::Hann, 32, 0.5, 8000)},
      {DwtConfig{"db4", 40}},  // more levels than any mixture supports
      {WptConfig{"sym4", 3}},
      {DwtConfig{"sym4", 3}},
  };
  const auto serial = evaluate_configs(mixes, configs, 1, 1, SortKey::None);
  const auto parallel = evaluate_configs(mixes, configs, 1, 4, SortKey::None);
  REQUIRE(serial.rows.size() == 4);
  CHECK(serial.rows[1].status.starts_with("failed: "));
  CHECK_FALSE(serial.rows[1].mean.stoi);
  for (std::size_t i : {0, 2, 3}) {
    CHECK(serial.rows[i].status == "ok");
    CHECK(serial.rows[i].n_mixtures == 3);
    CHECK(serial.rows[i].mean.stoi == parallel.rows[i].mean.stoi);
    CHECK(serial.rows[i].mean.si_sdr == parallel.rows[i].mean.si_sdr);
  }

  const auto sorted = evaluate_configs(mixes, configs, 1, 2, SortKey::Stoi);
  for (std::size_t i = 0; i + 2 < sorted.rows.size(); ++i) {
    CHECK(*sorted.rows[i].mean.stoi >= *sorted.rows[i + 1].mean.stoi);
  }
  CHECK(sorted.rows.back().status != "ok");
  const auto by_mse = evaluate_configs(mixes, configs, 1, 1, SortKey::Mse);
  CHECK(*by_mse.rows[0].mean.mse <= *by_mse.rows[1].mean.mse);
  CHECK(parse_sort_key("si-sdr") == SortKey::SiSdr);
  CHECK_THROWS_AS(parse_sort_key("pesq"), InvalidArgument);
}

TEST_CASE("report formats") {
  ExperimentReport report;
  ReportRow row;
  row.decomposition = "wpt";
  row.params = "sym8 levels=6 mode=periodization";
  row.mean.stoi = 0.5;
  row.mean.si_sdr = std::numeric_limits<double>::infinity();
  row.mean.snr = -std::numeric_limits<double>::infinity();
  row.mean.decomposition_time = 0.25;
  row.n_mixtures = 10;
  report.rows.push_back(row);

  const auto csv = format_report(report, ReportFormat::Csv);
  std::stringstream lines(csv);
  std::string header;
  std::string first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "decomposition,params,STOI,SI-SDR,SNR,MSE,time_s,n_mixtures,status");
  const auto f = csv_fields(first);
  REQUIRE(f.size() == 9);
  CHECK(f[0] == "wpt");
  CHECK(f[1] == row.params);
  CHECK(std::stod(f[2]) == 0.5);
  CHECK(f[3] == "inf");
  CHECK(f[4] == "-inf");
  CHECK(f[5].empty());
  CHECK(std::stod(f[6]) == 0.25);
  CHECK(f[7] == "10");
  CHECK(f[8] == "ok");

  const auto j = nlohmann::json::parse(format_report(report, ReportFormat::Json));
  REQUIRE(j.is_array());
  CHECK(j[0]["SI-SDR"] == "inf");
  CHECK(j[0]["MSE"].is_null());
  CHECK(j[0]["STOI"] == 0.5);
  CHECK(j[0]["n_mixtures"] == 10);

  const auto path = fs::temp_directory_path() / "tfsep_report.csv";
  emit_report(report, ReportFormat::Csv, path);
  CHECK(fs::file_size(path) == csv.size());
  fs::remove(path);
  CHECK_THROWS_AS(emit_report(report, ReportFormat::Csv, "/nonexistent/dir/r.csv"), IoError);
}

TEST_CASE("grid_search end to end") {
  const auto corpus = SpeakerCorpus::from_directory(synthetic_corpus());
  const auto grid = parse_grid(R"({
    "stft": {"windows": ["hann"], "sizes_ms": [32], "hop_fractions": [0.5]},
    "wavelet": {"families": ["db2"], "levels": [2]},
    "wpt": {"families": ["db2"], "levels": [2]}
  })");
  ExperimentOptions opt;
  opt.mixtures = 4;
  opt.seed = 9;
  const auto a = grid_search(corpus, grid, opt);
  opt.jobs = 3;
  const auto b = grid_search(corpus, grid, opt);
  REQUIRE(a.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].params == b.rows[i].params);
    CHECK(a.rows[i].mean.stoi == b.rows[i].mean.stoi);
    CHECK(a.rows[i].mean.mse == b.rows[i].mean.mse);
    CHECK(a.rows[i].seed == 9);
  }
  opt.mixtures = 0;
  CHECK_THROWS_AS(grid_search(corpus, grid, opt), InvalidArgument);
}
