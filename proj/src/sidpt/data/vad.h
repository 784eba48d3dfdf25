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

#ifndef SIDPT_DATA_VAD_H_
#define SIDPT_DATA_VAD_H_

#include <vector>

#include "sidpt/data/waveform.h"

namespace sidpt {

struct Segment {
  double onset = 0.0;
  double duration = 0.0;
  double End() const { return onset + duration; }
};

struct VadConfig {
  double window = 0.02;          // seconds
  double threshold_db = -30.0;   // relative to the loudest window
};

// Maximal runs of non-overlapping windows whose RMS exceeds threshold_db
// relative to the peak window RMS. A trailing partial window counts as a
// window. Digital silence yields no segments.
std::vector<Segment> EnergyVad(const Waveform& wave, double window, double threshold_db);
inline std::vector<Segment> EnergyVad(const Waveform& wave, const VadConfig& cfg = {}) {
  return EnergyVad(wave, cfg.window, cfg.threshold_db);
}

// Concatenation of the VAD speech segments; empty if none.
Waveform TrimSilence(const Waveform& wave, const VadConfig& cfg = {});

}  // namespace sidpt

#endif  // SIDPT_DATA_VAD_H_
