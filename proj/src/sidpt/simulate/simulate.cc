// Copyright (c) 2026 The sidpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sidpt/simulate/simulate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/data/activity.h"

namespace sidpt {

namespace {

constexpr int kSamplesPerMs = kSampleRate / 1000;
constexpr double kPeakTarget = 0.95;

long long MsFromSeconds(double s) { return std::llround(s * 1000.0); }

std::string SpeakerName(int id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%04d", id);
  return buf;
}

}  // namespace

void SimConfig::Validate() const {
  if (!(duration > 0)) throw ConfigError("simulate: duration must be positive");
  if (!(gap_mean > 0)) throw ConfigError("simulate: gap_mean must be positive");
  if (n_speakers_choices.empty()) throw ConfigError("simulate: n_speakers_choices is empty");
  for (int n : n_speakers_choices) {
    if (n < 1) throw ConfigError("simulate: speaker counts must be >= 1");
  }
  if (mixtures_per_setting < 0) throw ConfigError("simulate: negative mixtures_per_setting");
  if (snr_low_db > snr_high_db) throw ConfigError("simulate: empty SNR range");
}

nlohmann::json SimConfig::ToJson() const {
  return {{"n_speakers_choices", n_speakers_choices},
          {"duration", duration},
          {"gap_mean", gap_mean},
          {"snr_range_db", {snr_low_db, snr_high_db}},
          {"add_noise", add_noise},
          {"mixtures_per_setting", mixtures_per_setting},
          {"seed", seed},
          {"vad_window", vad.window},
          {"vad_threshold_db", vad.threshold_db}};
}

SimConfig SimConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "simulate";
  CheckKnownKeys(j, {"n_speakers_choices", "duration", "gap_mean", "snr_range_db", "add_noise",
                     "mixtures_per_setting", "seed", "vad_window", "vad_threshold_db"},
                 sec);
  SimConfig c;
  ReadKey(j, "n_speakers_choices", &c.n_speakers_choices, sec);
  ReadKey(j, "duration", &c.duration, sec);
  ReadKey(j, "gap_mean", &c.gap_mean, sec);
  std::vector<double> snr{c.snr_low_db, c.snr_high_db};
  ReadKey(j, "snr_range_db", &snr, sec);
  if (snr.size() != 2) throw ConfigError("simulate.snr_range_db: needs two values");
  c.snr_low_db = snr[0];
  c.snr_high_db = snr[1];
  ReadKey(j, "add_noise", &c.add_noise, sec);
  ReadKey(j, "mixtures_per_setting", &c.mixtures_per_setting, sec);
  ReadKey(j, "seed", &c.seed, sec);
  ReadKey(j, "vad_window", &c.vad.window, sec);
  ReadKey(j, "vad_threshold_db", &c.vad.threshold_db, sec);
  c.Validate();
  return c;
}

SpeakerPools TrimPools(const SpeakerPools& raw, const VadConfig& vad) {
  SpeakerPools out;
  for (const auto& [id, utts] : raw) {
    auto& dst = out[id];
    for (const auto& u : utts) {
      Waveform t = TrimSilence(u, vad);
      if (!t.empty()) dst.push_back(std::move(t));
    }
  }
  return out;
}

SimulatedMixture SimulateConversation(const std::vector<const std::vector<Waveform>*>& pools,
                                      const std::vector<std::string>& speaker_names,
                                      const std::vector<Waveform>& noises, const SimConfig& cfg,
                                      Rng& rng, const std::string& file_id) {
  cfg.Validate();
  if (pools.size() != speaker_names.size()) throw SimulationError("pools/speaker names mismatch");
  const long long total_ms = MsFromSeconds(cfg.duration);
  const size_t total = static_cast<size_t>(total_ms) * kSamplesPerMs;
  std::exponential_distribution<double> gap(1.0 / cfg.gap_mean);

  SimulatedMixture mix;
  mix.n_speakers = static_cast<int>(pools.size());
  for (size_t s = 0; s < pools.size(); ++s) {
    const auto* pool = pools[s];
    if (pool == nullptr || pool->empty()) {
      throw SimulationError("speaker " + speaker_names[s] + " has no usable utterance");
    }
    std::vector<float> track(total, 0.0f);
    long long t_ms = MsFromSeconds(gap(rng));
    while (t_ms < total_ms) {
      const Waveform& u = (*pool)[static_cast<size_t>(UniformInt(rng, 0, static_cast<int>(pool->size()) - 1))];
      const long long len_ms = std::min<long long>(static_cast<long long>(u.size()) / kSamplesPerMs,
                                                   total_ms - t_ms);
      if (len_ms > 0) {
        std::copy_n(u.samples.begin(), len_ms * kSamplesPerMs,
                    track.begin() + static_cast<std::ptrdiff_t>(t_ms * kSamplesPerMs));
        mix.records.push_back({file_id, static_cast<double>(t_ms) / 1000.0,
                               static_cast<double>(len_ms) / 1000.0, speaker_names[s]});
      }
      t_ms += len_ms + MsFromSeconds(gap(rng));
    }
    mix.tracks.push_back(std::move(track));
  }

  std::vector<double> sum(total, 0.0);
  for (const auto& tr : mix.tracks) {
    for (size_t i = 0; i < total; ++i) sum[i] += tr[i];
  }
  mix.scaled_noise.assign(total, 0.0f);
  if (cfg.add_noise && !noises.empty()) {
    const Waveform& src = noises[static_cast<size_t>(UniformInt(rng, 0, static_cast<int>(noises.size()) - 1))];
    const Waveform n = CropRandom(src, static_cast<double>(total_ms) / 1000.0, rng);
    const double snr = Uniform(rng, cfg.snr_low_db, cfg.snr_high_db);
    double speech = 0.0;
    for (double v : sum) speech += v * v;
    speech = std::sqrt(speech / static_cast<double>(std::max<size_t>(total, 1)));
    const double nr = Rms(n.samples);
    if (speech > 0 && nr > 0) {
      const double g = speech / (nr * std::pow(10.0, snr / 20.0));
      for (size_t i = 0; i < total; ++i) mix.scaled_noise[i] = static_cast<float>(g * n.samples[i]);
    }
  }
  double peak = 0.0;
  for (size_t i = 0; i < total; ++i) {
    sum[i] += mix.scaled_noise[i];
    peak = std::max(peak, std::abs(sum[i]));
  }
  mix.output_gain = peak > 1.0 ? kPeakTarget / peak : 1.0;
  mix.audio.source_id = file_id;
  mix.audio.samples.resize(total);
  for (size_t i = 0; i < total; ++i) mix.audio.samples[i] = static_cast<float>(sum[i] * mix.output_gain);
  std::stable_sort(mix.records.begin(), mix.records.end(),
                   [](const RttmRecord& a, const RttmRecord& b) { return a.onset < b.onset; });
  return mix;
}

double OverlapRatio(const std::vector<RttmRecord>& records, double frame_shift) {
  if (records.empty()) return 0.0;
  const auto speakers = SpeakersOf(records);
  const ActivityMatrix a = RttmToActivity(records, frame_shift, FramesToCover(records, frame_shift), speakers);
  long long speech = 0, overlap = 0;
  for (int t = 0; t < a.num_frames(); ++t) {
    const int n = a.ActiveCount(t);
    speech += n > 0;
    overlap += n > 1;
  }
  return speech > 0 ? static_cast<double>(overlap) / static_cast<double>(speech) : 0.0;
}

std::vector<MixtureEntry> GenerateCorpus(const SimConfig& cfg, const SpeakerPools& pools,
                                         const std::vector<Waveform>& noises,
                                         const std::string& out_dir) {
  cfg.Validate();
  namespace fs = std::filesystem;
  std::vector<int> ids;
  for (const auto& [id, utts] : pools) {
    if (!utts.empty()) ids.push_back(id);
  }
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "wav", ec);
  fs::create_directories(fs::path(out_dir) / "rttm", ec);
  if (ec) throw IoError(out_dir + ": " + ec.message());

  std::vector<MixtureEntry> manifest;
  uint64_t index = 0;
  for (int n_spk : cfg.n_speakers_choices) {
    if (n_spk > static_cast<int>(ids.size())) {
      throw SimulationError("need " + std::to_string(n_spk) + " speakers with usable audio, have " +
                            std::to_string(ids.size()));
    }
    for (int m = 0; m < cfg.mixtures_per_setting; ++m, ++index) {
      Rng rng(DeriveSeed(cfg.seed, index));
      std::vector<int> chosen = ids;
      std::shuffle(chosen.begin(), chosen.end(), rng);
      chosen.resize(static_cast<size_t>(n_spk));
      std::sort(chosen.begin(), chosen.end());
      std::vector<const std::vector<Waveform>*> sel;
      std::vector<std::string> names;
      for (int id : chosen) {
        sel.push_back(&pools.at(id));
        names.push_back(SpeakerName(id));
      }
      char fid[64];
      std::snprintf(fid, sizeof(fid), "sim_n%d_%05d", n_spk, m);
      SimulatedMixture mix = SimulateConversation(sel, names, noises, cfg, rng, fid);
      MixtureEntry e;
      e.file_id = fid;
      e.wav_path = "wav/" + e.file_id + ".wav";
      e.rttm_path = "rttm/" + e.file_id + ".rttm";
      e.n_speakers = n_spk;
      WriteWav((fs::path(out_dir) / e.wav_path).string(), mix.audio);
      WriteRttm((fs::path(out_dir) / e.rttm_path).string(), mix.records);
      manifest.push_back(e);
    }
  }
  std::vector<nlohmann::json> rows;
  for (const auto& e : manifest) rows.push_back(ToJson(e));
  WriteJsonLines((fs::path(out_dir) / "manifest.jsonl").string(), rows);
  return manifest;
}

}  // namespace sidpt
