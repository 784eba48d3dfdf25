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

#include "sidpt/features/logmel.h"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"

namespace sidpt {

int FeatureConfig::WindowSamples() const {
  return static_cast<int>(std::lround(win * kSampleRate));
}

int FeatureConfig::HopSamples() const {
  return static_cast<int>(std::lround(hop * kSampleRate));
}

void FeatureConfig::Validate() const {
  if (num_mels < 1) throw ConfigError("features.num_mels must be >= 1");
  if (!(hop > 0) || win < hop) throw ConfigError("features: need win >= hop > 0");
  if (fft_size < WindowSamples()) throw ConfigError("features.fft_size shorter than window");
  if (fmax > kSampleRate / 2.0) throw ConfigError("features.fmax above Nyquist");
  if (!(fmin >= 0) || fmin >= fmax) throw ConfigError("features: need 0 <= fmin < fmax");
}

nlohmann::json FeatureConfig::ToJson() const {
  return {{"num_mels", num_mels}, {"win", win},   {"hop", hop},       {"fft_size", fft_size},
          {"fmin", fmin},         {"fmax", fmax}, {"dither", dither}, {"dither_seed", dither_seed}};
}

FeatureConfig FeatureConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "features";
  CheckKnownKeys(j, {"num_mels", "win", "hop", "fft_size", "fmin", "fmax", "dither", "dither_seed"}, sec);
  FeatureConfig c;
  ReadKey(j, "num_mels", &c.num_mels, sec);
  ReadKey(j, "win", &c.win, sec);
  ReadKey(j, "hop", &c.hop, sec);
  ReadKey(j, "fft_size", &c.fft_size, sec);
  ReadKey(j, "fmin", &c.fmin, sec);
  ReadKey(j, "fmax", &c.fmax, sec);
  ReadKey(j, "dither", &c.dither, sec);
  ReadKey(j, "dither_seed", &c.dither_seed, sec);
  c.Validate();
  return c;
}

void MeanNormalize(Matrix* values) {
  if (values->rows() == 0) return;
  const RowVector mean = values->colwise().mean();
  values->rowwise() -= mean;
}

int NumFrames(size_t num_samples, const FeatureConfig& cfg) {
  const auto w = static_cast<size_t>(cfg.WindowSamples());
  const auto h = static_cast<size_t>(cfg.HopSamples());
  if (num_samples < w) return 0;
  return static_cast<int>((num_samples - w) / h + 1);
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix MelFilterbank(const FeatureConfig& cfg) {
  const int bins = cfg.fft_size / 2 + 1;
  Matrix fb = Matrix::Zero(cfg.num_mels, bins);
  const double lo = HzToMel(cfg.fmin), hi = HzToMel(cfg.fmax);
  std::vector<double> edges(cfg.num_mels + 2);
  for (int i = 0; i < cfg.num_mels + 2; ++i) {
    edges[i] = lo + (hi - lo) * i / (cfg.num_mels + 1);
  }
  for (int k = 0; k < bins; ++k) {
    double mel = HzToMel(static_cast<double>(k) * kSampleRate / cfg.fft_size);
    for (int m = 0; m < cfg.num_mels; ++m) {
      double left = edges[m], center = edges[m + 1], right = edges[m + 2];
      if (mel > left && mel < right) {
        fb(m, k) = mel <= center ? (mel - left) / (center - left)
                                 : (right - mel) / (right - center);
      }
    }
  }
  return fb;
}

namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

}  // namespace

FeatureSequence LogMel(const Waveform& wave, const FeatureConfig& cfg) {
  cfg.Validate();
  const int w = cfg.WindowSamples();
  const int h = cfg.HopSamples();
  const int n_fft = cfg.fft_size;
  const int bins = n_fft / 2 + 1;
  const int frames = NumFrames(wave.size(), cfg);
  if (frames <= 0) {
    throw LengthError("input of " + std::to_string(wave.size()) +
                      " samples is shorter than one window (" + std::to_string(w) + ")");
  }

  std::vector<double> signal(wave.samples.begin(), wave.samples.end());
  if (cfg.dither > 0) {
    Rng rng(cfg.dither_seed);
    std::normal_distribution<double> gauss(0.0, cfg.dither);
    for (double& x : signal) x += gauss(rng);
  }

  std::vector<double> window(w);
  for (int i = 0; i < w; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (w - 1));
  }
  const Matrix fb = MelFilterbank(cfg);

  double* in = fftw_alloc_real(n_fft);
  fftw_complex* out = fftw_alloc_complex(bins);
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan(
      fftw_plan_dft_r2c_1d(n_fft, in, out, FFTW_ESTIMATE));

  FeatureSequence feats;
  feats.hop = cfg.hop;
  feats.values.resize(frames, cfg.num_mels);
  ColVector power(bins);
  for (int t = 0; t < frames; ++t) {
    const double* frame = signal.data() + static_cast<size_t>(t) * h;
    for (int i = 0; i < w; ++i) in[i] = frame[i] * window[i];
    for (int i = w; i < n_fft; ++i) in[i] = 0.0;
    fftw_execute(plan.get());
    for (int k = 0; k < bins; ++k) power(k) = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    ColVector mel = fb * power;
    for (int m = 0; m < cfg.num_mels; ++m) feats.values(t, m) = std::log(mel(m) + kLogFloor);
  }
  plan.reset();
  fftw_free(in);
  fftw_free(out);
  return feats;
}

}  // namespace sidpt
