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

#include "sidpt/data/synth.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sidpt/common/error.h"

namespace sidpt {

namespace {

constexpr double kPi = std::numbers::pi;

class Biquad {
 public:
  // Band-pass with 0 dB peak gain.
  Biquad(double center, double bandwidth) {
    double w0 = 2.0 * kPi * center / kSampleRate;
    double q = center / bandwidth;
    double alpha = std::sin(w0) / (2.0 * q);
    double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2.0 * std::cos(w0) / a0;
    a2_ = (1.0 - alpha) / a0;
  }

  double Step(double x) {
    double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

// Paul Kellet's refined pink filter.
class PinkFilter {
 public:
  double Step(double white) {
    b_[0] = 0.99886 * b_[0] + white * 0.0555179;
    b_[1] = 0.99332 * b_[1] + white * 0.0750759;
    b_[2] = 0.96900 * b_[2] + white * 0.1538520;
    b_[3] = 0.86650 * b_[3] + white * 0.3104856;
    b_[4] = 0.55000 * b_[4] + white * 0.5329522;
    b_[5] = -0.7616 * b_[5] - white * 0.0168980;
    double pink = b_[0] + b_[1] + b_[2] + b_[3] + b_[4] + b_[5] + b_[6] + white * 0.5362;
    b_[6] = white * 0.115926;
    return pink * 0.11;
  }

 private:
  std::array<double, 7> b_{};
};

double UnitFromHash(uint64_t h) {
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

void NormalizeRms(std::vector<float>* s, double target) {
  double rms = Rms(*s);
  if (rms <= 0) return;
  double g = target / rms;
  for (float& x : *s) x = static_cast<float>(x * g);
}

}  // namespace

SyntheticVoice VoiceForSpeaker(int speaker_id) {
  if (speaker_id < 0) throw LabelError("speaker_id must be non-negative");
  // Formant-like bands; each centre is drawn inside its band from a hash of
  // the id so that nearby ids are unrelated.
  static constexpr std::array<std::array<double, 2>, 4> kBands = {
      {{250.0, 900.0}, {900.0, 2300.0}, {2300.0, 3600.0}, {3600.0, 5600.0}}};
  SyntheticVoice v;
  uint64_t h = MixSeed(static_cast<uint64_t>(speaker_id) * 0x100000001b3ULL + 17);
  for (int k = 0; k < 4; ++k) {
    h = MixSeed(h);
    v.centers[k] = kBands[k][0] + UnitFromHash(h) * (kBands[k][1] - kBands[k][0]);
    h = MixSeed(h);
    v.bandwidths[k] = v.centers[k] * (0.06 + 0.08 * UnitFromHash(h));
    h = MixSeed(h);
    // Pink excitation falls off with frequency; lift the upper bands.
    v.gains[k] = (0.4 + 1.2 * UnitFromHash(h)) * std::sqrt(v.centers[k] / 500.0);
  }
  h = MixSeed(h);
  v.syllable_rate = 3.5 + 1.5 * UnitFromHash(h);
  return v;
}

Waveform SynthSpeakerUtterance(int speaker_id, double duration, uint64_t seed) {
  if (!(duration > 0)) throw LengthError("duration must be positive");
  const SyntheticVoice voice = VoiceForSpeaker(speaker_id);
  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(speaker_id)));
  const size_t n = SecondsToSamples(duration);

  // Small per-utterance jitter keeps utterances of one speaker from being
  // bit-identical in spectrum.
  std::vector<Biquad> bank;
  std::array<double, 4> gains{};
  for (int k = 0; k < 4; ++k) {
    double jitter = 1.0 + Uniform(rng, -0.03, 0.03);
    bank.emplace_back(voice.centers[k] * jitter, voice.bandwidths[k]);
    gains[k] = voice.gains[k] * (1.0 + Uniform(rng, -0.1, 0.1));
  }
  const double rate = voice.syllable_rate * (1.0 + Uniform(rng, -0.1, 0.1));
  const double phase = Uniform(rng, 0.0, 2.0 * kPi);

  // Phrase gate: speech runs of 0.8-2.5 s separated by 0.15-0.5 s pauses,
  // with 10 ms raised-cosine ramps.
  std::vector<float> gate(n, 0.0f);
  {
    const size_t ramp = SecondsToSamples(0.01);
    size_t pos = SecondsToSamples(Uniform(rng, 0.0, 0.2));
    while (pos < n) {
      size_t len = SecondsToSamples(Uniform(rng, 0.8, 2.5));
      for (size_t i = 0; i < len && pos + i < n; ++i) {
        double g = 1.0;
        if (i < ramp) g = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(i) / ramp));
        if (len - i <= ramp) {
          g = std::min(g, 0.5 * (1.0 - std::cos(kPi * static_cast<double>(len - i) / ramp)));
        }
        gate[pos + i] = static_cast<float>(g);
      }
      pos += len + SecondsToSamples(Uniform(rng, 0.15, 0.5));
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  PinkFilter pink;
  Waveform out;
  out.source_id = "synth:spk" + std::to_string(speaker_id);
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double e = pink.Step(gauss(rng));
    double y = 0.0;
    for (int k = 0; k < 4; ++k) y += gains[k] * bank[k].Step(e);
    double t = static_cast<double>(i) / kSampleRate;
    double syllable = 0.35 + 0.65 * 0.5 * (1.0 - std::cos(2.0 * kPi * rate * t + phase));
    out.samples[i] = static_cast<float>(y * syllable * gate[i]);
  }
  NormalizeRms(&out.samples, 0.08 * (1.0 + Uniform(rng, -0.25, 0.25)));
  return out;
}

Waveform SynthNoise(int noise_id, double duration, uint64_t seed) {
  if (!(duration > 0)) throw LengthError("duration must be positive");
  Rng rng(DeriveSeed(seed ^ 0x5eedf00dULL, static_cast<uint64_t>(noise_id)));
  const size_t n = SecondsToSamples(duration);
  uint64_t h = MixSeed(static_cast<uint64_t>(noise_id) + 991);
  // One-pole low-pass colour plus an optional mains-like hum.
  const double pole = 0.98 * UnitFromHash(h);
  h = MixSeed(h);
  const double hum_freq = 50.0 * (1 + static_cast<int>(UnitFromHash(h) * 4));
  h = MixSeed(h);
  const double hum_level = UnitFromHash(h) < 0.5 ? 0.0 : 0.3;

  std::normal_distribution<double> gauss(0.0, 1.0);
  Waveform out;
  out.source_id = "synth:noise" + std::to_string(noise_id);
  out.samples.resize(n);
  double state = 0.0;
  for (size_t i = 0; i < n; ++i) {
    state = pole * state + (1.0 - pole) * gauss(rng);
    double t = static_cast<double>(i) / kSampleRate;
    out.samples[i] = static_cast<float>(state + hum_level * std::sin(2.0 * kPi * hum_freq * t) *
                                                    (1.0 - pole));
  }
  NormalizeRms(&out.samples, 0.05);
  return out;
}

}  // namespace sidpt
