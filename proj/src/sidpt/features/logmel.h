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

#ifndef SIDPT_FEATURES_LOGMEL_H_
#define SIDPT_FEATURES_LOGMEL_H_

#include <cstdint>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/data/waveform.h"

namespace sidpt {

struct FeatureConfig {
  int num_mels = 80;
  double win = 0.025;   // seconds
  double hop = 0.010;   // seconds
  int fft_size = 512;
  double fmin = 20.0;
  double fmax = 7600.0;
  double dither = 0.0;  // Gaussian dither amplitude; 0 disables
  uint64_t dither_seed = 0;

  int WindowSamples() const;
  int HopSamples() const;
  // Throws ConfigError when an invariant is violated.
  void Validate() const;
  nlohmann::json ToJson() const;
  static FeatureConfig FromJson(const nlohmann::json& j);
  bool operator==(const FeatureConfig&) const = default;
};

// T x F log mel energies.
struct FeatureSequence {
  Matrix values;
  double hop = 0.010;

  int num_frames() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

inline constexpr double kLogFloor = 1e-10;

// Frames this extractor produces for `num_samples` input samples (no centre
// padding): floor((N - W) / H) + 1, or 0 when N < W.
int NumFrames(size_t num_samples, const FeatureConfig& cfg);

// Hann window, |FFT|^2, HTK-scale triangular mel filters, log(E + 1e-10).
// Throws LengthError when the input is shorter than one window.
// Subtracts the per-dimension mean over frames (no-op for zero frames).
void MeanNormalize(Matrix* values);

FeatureSequence LogMel(const Waveform& wave, const FeatureConfig& cfg = {});

// Filterbank weights, num_mels x (fft_size / 2 + 1).
Matrix MelFilterbank(const FeatureConfig& cfg);

double HzToMel(double hz);
double MelToHz(double mel);

}  // namespace sidpt

#endif  // SIDPT_FEATURES_LOGMEL_H_
