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

#ifndef SIDPT_DATA_WAVEFORM_H_
#define SIDPT_DATA_WAVEFORM_H_

#include <string>
#include <vector>

#include "sidpt/common/random.h"

namespace sidpt {

inline constexpr int kSampleRate = 16000;

// Mono 16 kHz audio with samples nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kSampleRate;
  std::string source_id;

  Waveform() = default;
  explicit Waveform(std::vector<float> s, std::string id = {})
      : samples(std::move(s)), source_id(std::move(id)) {}

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline size_t SecondsToSamples(double seconds) {
  return static_cast<size_t>(seconds * kSampleRate + 0.5);
}

// Reads a PCM 16-bit mono 16 kHz WAV file. Samples are divided by 32768.
// Throws FormatError naming the offending property for anything else.
Waveform ReadWav(const std::string& path);

// Writes PCM 16-bit mono. Samples outside [-1, 1] are clipped.
void WriteWav(const std::string& path, const Waveform& wave);

// Returns a random crop of exactly duration * 16000 samples. Inputs shorter
// than that are first extended by repetition.
Waveform CropRandom(const Waveform& wave, double duration, Rng& rng);

double Rms(const std::vector<float>& samples);
double PeakAbs(const std::vector<float>& samples);

}  // namespace sidpt

#endif  // SIDPT_DATA_WAVEFORM_H_
