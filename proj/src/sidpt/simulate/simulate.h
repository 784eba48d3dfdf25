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

#ifndef SIDPT_SIMULATE_SIMULATE_H_
#define SIDPT_SIMULATE_SIMULATE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/common/random.h"
#include "sidpt/data/manifest.h"
#include "sidpt/data/rttm.h"
#include "sidpt/data/vad.h"
#include "sidpt/data/waveform.h"

namespace sidpt {

struct SimConfig {
  std::vector<int> n_speakers_choices = {1, 2, 3, 4};
  double duration = 20.0;    // seconds
  double gap_mean = 2.0;     // mean of the exponential silence gaps, seconds
  double snr_low_db = 5.0;
  double snr_high_db = 20.0;
  bool add_noise = true;
  int mixtures_per_setting = 20;
  uint64_t seed = 0;
  VadConfig vad;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SimConfig FromJson(const nlohmann::json& j);
};

struct SimulatedMixture {
  Waveform audio;
  std::vector<RttmRecord> records;
  int n_speakers = 0;
  // Construction terms: audio == (sum of tracks + scaled_noise) * output_gain.
  std::vector<std::vector<float>> tracks;
  std::vector<float> scaled_noise;
  double output_gain = 1.0;
};

// VAD-trimmed utterances per speaker, keyed by speaker id.
using SpeakerPools = std::map<int, std::vector<Waveform>>;

// Trims every utterance with the energy VAD and drops those left empty.
SpeakerPools TrimPools(const SpeakerPools& raw, const VadConfig& vad);

// One conversation. Each speaker track alternates exponential(gap_mean)
// silences (starting with one) and utterances drawn from its pool until the
// duration is filled; the last utterance is truncated. Placements fall on a
// millisecond grid so the RTTM text is exact. `noises` may be empty.
// Throws SimulationError for an empty pool.
SimulatedMixture SimulateConversation(const std::vector<const std::vector<Waveform>*>& pools,
                                      const std::vector<std::string>& speaker_names,
                                      const std::vector<Waveform>& noises, const SimConfig& cfg,
                                      Rng& rng, const std::string& file_id);

// Overlapped speech over total speech on a 10 ms grid; 0 for no speech.
double OverlapRatio(const std::vector<RttmRecord>& records, double frame_shift = 0.01);

// Writes mixtures_per_setting mixtures per speaker count into out_dir
// (wav/, rttm/, manifest.jsonl) and returns the manifest rows. Mixture i
// uses seed DeriveSeed(cfg.seed, i).
std::vector<MixtureEntry> GenerateCorpus(const SimConfig& cfg, const SpeakerPools& pools,
                                         const std::vector<Waveform>& noises,
                                         const std::string& out_dir);

}  // namespace sidpt

#endif  // SIDPT_SIMULATE_SIMULATE_H_
