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

#include "sidpt/data/vad.h"

#include <algorithm>
#include <cmath>

#include "sidpt/common/error.h"

namespace sidpt {

std::vector<Segment> EnergyVad(const Waveform& wave, double window, double threshold_db) {
  if (!(window > 0)) throw LengthError("VAD window must be positive");
  const size_t win = std::max<size_t>(1, SecondsToSamples(window));
  const size_t n = wave.size();
  const size_t num_windows = (n + win - 1) / win;

  std::vector<double> rms(num_windows, 0.0);
  double peak = 0.0;
  for (size_t w = 0; w < num_windows; ++w) {
    size_t lo = w * win, hi = std::min(n, lo + win);
    double acc = 0.0;
    for (size_t i = lo; i < hi; ++i) acc += static_cast<double>(wave.samples[i]) * wave.samples[i];
    rms[w] = std::sqrt(acc / static_cast<double>(hi - lo));
    peak = std::max(peak, rms[w]);
  }
  std::vector<Segment> out;
  if (peak <= 0.0) return out;

  const double floor = peak * std::pow(10.0, threshold_db / 20.0);
  size_t w = 0;
  while (w < num_windows) {
    if (rms[w] <= floor) {
      ++w;
      continue;
    }
    size_t start = w;
    while (w < num_windows && rms[w] > floor) ++w;
    size_t lo = start * win, hi = std::min(n, w * win);
    out.push_back({static_cast<double>(lo) / kSampleRate,
                   static_cast<double>(hi - lo) / kSampleRate});
  }
  return out;
}

Waveform TrimSilence(const Waveform& wave, const VadConfig& cfg) {
  Waveform out;
  out.source_id = wave.source_id;
  for (const auto& seg : EnergyVad(wave, cfg)) {
    size_t lo = SecondsToSamples(seg.onset);
    size_t hi = std::min(wave.size(), SecondsToSamples(seg.End()));
    out.samples.insert(out.samples.end(), wave.samples.begin() + static_cast<std::ptrdiff_t>(lo),
                       wave.samples.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return out;
}

}  // namespace sidpt
