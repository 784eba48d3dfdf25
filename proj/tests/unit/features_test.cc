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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sidpt/common/error.h"
#include "sidpt/data/synth.h"
#include "sidpt/features/logmel.h"

namespace sidpt {
namespace {

TEST(LogMel, FrameCounts) {
  FeatureConfig cfg;
  EXPECT_EQ(cfg.WindowSamples(), 400);
  EXPECT_EQ(cfg.HopSamples(), 160);
  EXPECT_EQ(NumFrames(48000, cfg), 298);
  EXPECT_EQ(NumFrames(160000, cfg), 998);
  EXPECT_EQ(NumFrames(400, cfg), 1);
  EXPECT_EQ(NumFrames(399, cfg), 0);
  FeatureSequence f = LogMel(Waveform(std::vector<float>(48000, 0.1f)), cfg);
  EXPECT_EQ(f.num_frames(), 298);
  EXPECT_EQ(f.dim(), 80);
}

TEST(LogMel, ZeroSignalHitsFloor) {
  FeatureSequence f = LogMel(Waveform(std::vector<float>(4000, 0.0f)));
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    EXPECT_DOUBLE_EQ(f.values.data()[i], std::log(1e-10));
  }
}

TEST(LogMel, TooShort) {
  EXPECT_THROW(LogMel(Waveform(std::vector<float>(100, 0.0f))), LengthError);
}

TEST(LogMel, MatchesNaiveDft) {
  FeatureConfig cfg;
  Waveform w = SynthSpeakerUtterance(2, 0.1, 3);
  FeatureSequence f = LogMel(w, cfg);
  const Matrix fb = MelFilterbank(cfg);
  const int n_fft = cfg.fft_size, win = cfg.WindowSamples();
  for (int t : {0, 3, f.num_frames() - 1}) {
    Eigen::VectorXd power(n_fft / 2 + 1);
    for (int k = 0; k <= n_fft / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < win; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / (win - 1));
        const double x = w.samples[t * cfg.HopSamples() + i] * hann;
        acc += x * std::polar(1.0, -2 * std::numbers::pi * k * i / n_fft);
      }
      power(k) = std::norm(acc);
    }
    Eigen::VectorXd mel = fb * power;
    for (int m = 0; m < cfg.num_mels; ++m) {
      EXPECT_NEAR(f.values(t, m), std::log(mel(m) + kLogFloor), 1e-8) << t << "," << m;
    }
  }
}

TEST(LogMel, TonePeaksInMatchingBand) {
  FeatureConfig cfg;
  const double hz = 1000.0;
  std::vector<float> x(16000);
  for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>(0.5 * std::sin(2 * M_PI * hz * i / 16000));
  FeatureSequence f = LogMel(Waveform(x), cfg);
  Eigen::Index best = 0;
  f.values.row(10).maxCoeff(&best);
  const Matrix fb = MelFilterbank(cfg);
  const int bin = static_cast<int>(std::lround(hz * cfg.fft_size / 16000.0));
  Eigen::Index fb_best = 0;
  fb.col(bin).maxCoeff(&fb_best);
  EXPECT_LE(std::abs(best - fb_best), 1);
}

TEST(LogMel, DitherDeterministic) {
  FeatureConfig cfg;
  cfg.dither = 1e-3;
  cfg.dither_seed = 5;
  Waveform w(std::vector<float>(8000, 0.0f));
  EXPECT_EQ(LogMel(w, cfg).values, LogMel(w, cfg).values);
  FeatureConfig other = cfg;
  other.dither_seed = 6;
  EXPECT_NE(LogMel(w, cfg).values, LogMel(w, other).values);
}

TEST(Filterbank, TrianglesWithinRange) {
  FeatureConfig cfg;
  Matrix fb = MelFilterbank(cfg);
  EXPECT_EQ(fb.rows(), 80);
  EXPECT_EQ(fb.cols(), 257);
  EXPECT_GE(fb.minCoeff(), 0.0);
  EXPECT_LE(fb.maxCoeff(), 1.0);
  for (int m = 0; m < fb.rows(); ++m) EXPECT_GT(fb.row(m).sum(), 0.0) << "empty filter " << m;
  EXPECT_NEAR(MelToHz(HzToMel(1234.5)), 1234.5, 1e-9);
}

TEST(FeatureConfig, Validation) {
  FeatureConfig c;
  c.num_mels = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = FeatureConfig();
  c.fmax = 9000;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = FeatureConfig();
  c.fft_size = 256;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(FeatureConfig, JsonRoundtripAndUnknownKey) {
  FeatureConfig c;
  c.num_mels = 40;
  c.dither = 0.5;
  EXPECT_EQ(FeatureConfig::FromJson(c.ToJson()), c);
  EXPECT_THROW(FeatureConfig::FromJson({{"mels", 40}}), ConfigError);
}

TEST(MeanNormalize, ZeroColumnMeans) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(3.0, 2.0);
  Matrix m(20, 5);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  Matrix orig = m;
  MeanNormalize(&m);
  for (int c = 0; c < 5; ++c) EXPECT_NEAR(m.col(c).mean(), 0.0, 1e-12);
  EXPECT_NEAR((orig - m).col(2).maxCoeff() - (orig - m).col(2).minCoeff(), 0.0, 1e-12);
}

}  // namespace
}  // namespace sidpt
