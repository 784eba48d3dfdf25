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

#ifndef SIDPT_DATA_SYNTH_H_
#define SIDPT_DATA_SYNTH_H_

#include <array>
#include <cstdint>

#include "sidpt/data/waveform.h"

namespace sidpt {

// Spectral identity of a synthetic speaker. A pure function of the id.
struct SyntheticVoice {
  std::array<double, 4> centers{};     // Hz
  std::array<double, 4> bandwidths{};  // Hz
  std::array<double, 4> gains{};
  double syllable_rate = 4.0;          // Hz
};

SyntheticVoice VoiceForSpeaker(int speaker_id);

// Pink noise through the speaker's bank of four resonators, amplitude
// modulated at the speaker's syllable rate and gated into phrases separated
// by short pauses. Deterministic in (speaker_id, duration, seed).
Waveform SynthSpeakerUtterance(int speaker_id, double duration, uint64_t seed);

// Stationary coloured background noise; noise_id selects the colour.
Waveform SynthNoise(int noise_id, double duration, uint64_t seed);

}  // namespace sidpt

#endif  // SIDPT_DATA_SYNTH_H_
