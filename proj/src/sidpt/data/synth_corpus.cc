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

#include "sidpt/data/synth_corpus.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/common/random.h"
#include "sidpt/data/synth.h"
#include "sidpt/data/waveform.h"

namespace sidpt {

namespace fs = std::filesystem;

void SynthCorpusConfig::Validate() const {
  if (first_speaker < 0 || num_speakers < 1) throw ConfigError("corpus: bad speaker range");
  if (train_per_speaker < 0 || val_per_speaker < 0 || test_per_speaker < 0) {
    throw ConfigError("corpus: negative utterance count");
  }
  if (!(min_duration > 0) || max_duration < min_duration) throw ConfigError("corpus: bad durations");
  if (num_noises < 0 || !(noise_duration > 0)) throw ConfigError("corpus: bad noise settings");
  if (trials_per_condition < 0) throw ConfigError("corpus: negative trial count");
}

nlohmann::json SynthCorpusConfig::ToJson() const {
  return {{"first_speaker", first_speaker},       {"num_speakers", num_speakers},
          {"train_per_speaker", train_per_speaker}, {"val_per_speaker", val_per_speaker},
          {"test_per_speaker", test_per_speaker}, {"min_duration", min_duration},
          {"max_duration", max_duration},         {"num_noises", num_noises},
          {"noise_duration", noise_duration},     {"trials_per_condition", trials_per_condition},
          {"seed", seed}};
}

SynthCorpusConfig SynthCorpusConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "corpus";
  CheckKnownKeys(j, {"first_speaker", "num_speakers", "train_per_speaker", "val_per_speaker",
                     "test_per_speaker", "min_duration", "max_duration", "num_noises",
                     "noise_duration", "trials_per_condition", "seed"},
                 sec);
  SynthCorpusConfig c;
  ReadKey(j, "first_speaker", &c.first_speaker, sec);
  ReadKey(j, "num_speakers", &c.num_speakers, sec);
  ReadKey(j, "train_per_speaker", &c.train_per_speaker, sec);
  ReadKey(j, "val_per_speaker", &c.val_per_speaker, sec);
  ReadKey(j, "test_per_speaker", &c.test_per_speaker, sec);
  ReadKey(j, "min_duration", &c.min_duration, sec);
  ReadKey(j, "max_duration", &c.max_duration, sec);
  ReadKey(j, "num_noises", &c.num_noises, sec);
  ReadKey(j, "noise_duration", &c.noise_duration, sec);
  ReadKey(j, "trials_per_condition", &c.trials_per_condition, sec);
  ReadKey(j, "seed", &c.seed, sec);
  c.Validate();
  return c;
}

namespace {

struct TrialItem {
  std::string path;
  std::vector<int> speakers;
};

bool Shares(const TrialItem& a, const TrialItem& b) {
  for (int s : a.speakers) {
    if (std::find(b.speakers.begin(), b.speakers.end(), s) != b.speakers.end()) return true;
  }
  return false;
}

void SampleTrials(const std::vector<TrialItem>& enroll_pool, const std::vector<TrialItem>& test_pool,
                  TrialCondition cond, int count, Rng& rng, std::vector<TrialRecord>* out) {
  if (enroll_pool.empty() || test_pool.empty()) return;
  for (int i = 0; i < count; ++i) {
    const bool target = i % 2 == 0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const auto& e = enroll_pool[static_cast<size_t>(UniformInt(rng, 0, static_cast<int>(enroll_pool.size()) - 1))];
      std::vector<const TrialItem*> cands;
      for (const auto& t : test_pool) {
        if (t.path != e.path && Shares(e, t) == target) cands.push_back(&t);
      }
      if (cands.empty()) continue;
      const auto* t = cands[static_cast<size_t>(UniformInt(rng, 0, static_cast<int>(cands.size()) - 1))];
      out->push_back({e.path, t->path, target, cond});
      break;
    }
  }
}

}  // namespace

SynthCorpus GenerateSynthCorpus(const SynthCorpusConfig& cfg, const std::string& out_dir) {
  cfg.Validate();
  const fs::path root(out_dir);
  std::error_code ec;
  for (const char* d : {"wav", "noise", "multi"}) fs::create_directories(root / d, ec);
  if (ec) throw IoError(out_dir + ": " + ec.message());

  SynthCorpus corpus;
  std::vector<TrialItem> singles;
  std::vector<Waveform> test_waves;
  std::vector<int> test_speakers;
  const int per_speaker = cfg.train_per_speaker + cfg.val_per_speaker + cfg.test_per_speaker;
  for (int k = 0; k < cfg.num_speakers; ++k) {
    const int spk = cfg.first_speaker + k;
    for (int u = 0; u < per_speaker; ++u) {
      Rng rng(DeriveSeed(DeriveSeed(cfg.seed, static_cast<uint64_t>(spk)), static_cast<uint64_t>(u)));
      const double dur = Uniform(rng, cfg.min_duration, cfg.max_duration);
      Waveform w = SynthSpeakerUtterance(spk, dur, rng());
      char name[64];
      std::snprintf(name, sizeof(name), "wav/spk%04d_%03d.wav", spk, u);
      WriteWav((root / name).string(), w);
      UtteranceRecord r;
      r.audio_path = name;
      r.speaker_label = spk;
      r.duration = w.Duration();
      r.subset = u < cfg.train_per_speaker                         ? Subset::kTrain
                 : u < cfg.train_per_speaker + cfg.val_per_speaker ? Subset::kVal
                                                                   : Subset::kTest;
      if (r.subset == Subset::kTest) {
        singles.push_back({name, {spk}});
        test_waves.push_back(std::move(w));
        test_speakers.push_back(spk);
      }
      corpus.utterances.push_back(r);
    }
  }
  for (int n = 0; n < cfg.num_noises; ++n) {
    char name[64];
    std::snprintf(name, sizeof(name), "noise/noise%03d.wav", n);
    WriteWav((root / name).string(), SynthNoise(n, cfg.noise_duration, DeriveSeed(cfg.seed, 0x401500 + static_cast<uint64_t>(n))));
    corpus.noise_paths.push_back(name);
  }

  Rng rng(DeriveSeed(cfg.seed, 0x7a1a15));
  std::vector<TrialItem> multis;
  const int n_test = static_cast<int>(test_waves.size());
  for (int m = 0; n_test >= 2 && m < 2 * cfg.num_speakers; ++m) {
    const int a = UniformInt(rng, 0, n_test - 1);
    const int b = UniformInt(rng, 0, n_test - 1);
    if (test_speakers[a] == test_speakers[b]) continue;
    const double dur = std::min(test_waves[a].Duration(), test_waves[b].Duration());
    Rng crop_rng(DeriveSeed(cfg.seed, 0x3c00 + static_cast<uint64_t>(m)));
    Waveform x1 = CropRandom(test_waves[a], dur, crop_rng);
    Waveform x2 = CropRandom(test_waves[b], dur, crop_rng);
    Waveform mix(std::vector<float>(x1.size()));
    double peak = 0.0;
    for (size_t i = 0; i < x1.size(); ++i) {
      mix.samples[i] = x1.samples[i] + x2.samples[i];
      peak = std::max(peak, static_cast<double>(std::abs(mix.samples[i])));
    }
    if (peak > 1.0) {
      for (float& s : mix.samples) s = static_cast<float>(s * 0.95 / peak);
    }
    char name[64];
    std::snprintf(name, sizeof(name), "multi/mix%04d.wav", m);
    WriteWav((root / name).string(), mix);
    multis.push_back({name, {test_speakers[a], test_speakers[b]}});
  }
  SampleTrials(singles, singles, TrialCondition::kSingleVsSingle, cfg.trials_per_condition, rng, &corpus.trials);
  SampleTrials(singles, multis, TrialCondition::kSingleVsMulti, cfg.trials_per_condition, rng, &corpus.trials);
  SampleTrials(multis, multis, TrialCondition::kMultiVsMulti, cfg.trials_per_condition, rng, &corpus.trials);

  std::vector<nlohmann::json> rows;
  for (const auto& u : corpus.utterances) rows.push_back(ToJson(u));
  WriteJsonLines((root / "utterances.jsonl").string(), rows);
  rows.clear();
  for (const auto& p : corpus.noise_paths) rows.push_back({{"audio_path", p}});
  WriteJsonLines((root / "noises.jsonl").string(), rows);
  std::ofstream trials((root / "trials.txt").string(), std::ios::binary);
  if (!trials) throw IoError((root / "trials.txt").string() + ": cannot open for writing");
  trials << EmitTrials(corpus.trials);
  return corpus;
}

std::vector<std::string> ReadNoiseManifest(const std::string& path) {
  std::vector<std::string> out;
  for (const auto& j : ReadJsonLines(path)) {
    if (!j.contains("audio_path")) throw FormatError(path + ": noise entry without audio_path");
    out.push_back(ResolveRelative(path, j.at("audio_path").get<std::string>()));
  }
  return out;
}

}  // namespace sidpt
