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

#ifndef SIDPT_MIXING_MIXING_H_
#define SIDPT_MIXING_MIXING_H_

#include <limits>
#include <vector>

#include "json.hpp"
#include "sidpt/common/random.h"
#include "sidpt/data/waveform.h"

namespace sidpt {

struct MixBatchConfig {
  int n_single = 8;
  int n_double = 4;
  int n_zero_max = 4;
  double crop = 3.0;  // seconds
  double augment_prob = 0.5;
  double snr_low_db = 5.0;
  double snr_high_db = 20.0;
  double pair_gain_low_db = -5.0;
  double pair_gain_high_db = 5.0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static MixBatchConfig FromJson(const nlohmann::json& j);
};

struct LabeledWave {
  Waveform wave;
  int speaker = 0;
};

// Entries are ordered singles, then two-speaker mixtures, then noise-only.
struct SidBatch {
  std::vector<Waveform> audio;
  std::vector<std::vector<int>> label_sets;
  std::vector<int> count_targets;

  size_t size() const { return audio.size(); }
};

// Passing this as snr_db leaves the signal untouched.
inline constexpr double kNoAugmentation = std::numeric_limits<double>::infinity();

// x1 + 10^(gain_db/20) x2, rescaled to a 0.95 peak only if it exceeds 1.
Waveform MixTwo(const Waveform& x1, const Waveform& x2, double gain_db);

// x + g noise with g chosen so the signal-to-noise ratio is snr_db. Silent
// noise or kNoAugmentation returns x. Throws DegenerateInputError for a
// silent x and ShapeError for a length mismatch.
Waveform AugmentNoise(const Waveform& x, const Waveform& noise, double snr_db);

// Noise gain that realises snr_db for the given RMS values.
double NoiseGainForSnr(double signal_rms, double noise_rms, double snr_db);

// Builds one minibatch from the first cfg.n_single entries of `singles`.
// Two-speaker mixtures pair disjoint crops of distinct speakers; noise-only
// entries reuse noise crops that augmented this batch. Throws
// BatchCompositionError when n_double distinct-speaker pairs cannot be
// formed.
SidBatch BuildSidMinibatch(const std::vector<LabeledWave>& singles,
                           const std::vector<Waveform>& noises, const MixBatchConfig& cfg,
                           Rng& rng);

// Picks 2k items out of `speakers` (positions) and pairs them so that no pair
// shares a speaker; empty when impossible.
std::vector<std::pair<int, int>> DistinctSpeakerPairs(const std::vector<int>& speakers, int k,
                                                      Rng& rng);

}  // namespace sidpt

#endif  // SIDPT_MIXING_MIXING_H_
