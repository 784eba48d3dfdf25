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
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sidpt/common/error.h"
#include "sidpt/encoder/encoder.h"
#include "sidpt/nn/ops.h"

namespace sidpt {
namespace {

FeatureSequence RandomFeatures(int t, int d, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  FeatureSequence f;
  f.values.resize(t, d);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = n(rng);
  return f;
}

TEST(Encoder, ShapeContract) {
  EncoderConfig cfg;
  auto params = encoder::InitParams(cfg);
  FrameEmbeddingSequence e = encoder::Encode(RandomFeatures(298, 80, 1), params, cfg);
  EXPECT_EQ(e.num_frames(), 298);
  EXPECT_EQ(e.dim(), cfg.emb_dim);
  EXPECT_THROW(encoder::Encode(RandomFeatures(10, 40, 1), params, cfg), ShapeError);
}

TEST(Encoder, Deterministic) {
  EncoderConfig cfg;
  cfg.seed = 17;
  auto x = RandomFeatures(50, 80, 2);
  auto a = encoder::Encode(x, encoder::InitParams(cfg), cfg);
  auto b = encoder::Encode(x, encoder::InitParams(cfg), cfg);
  EXPECT_EQ(a.values, b.values);
  cfg.seed = 18;
  EXPECT_NE(encoder::Encode(x, encoder::InitParams(cfg), cfg).values, a.values);
}

TEST(Encoder, ReceptiveFieldFormula) {
  EncoderConfig cfg;
  EXPECT_EQ(cfg.ReceptiveField(), 13);
  cfg.dilations = {1, 1};
  cfg.num_blocks = 2;
  cfg.kernel = 5;
  EXPECT_EQ(cfg.ReceptiveField(), 9);
}

TEST(Encoder, Locality) {
  EncoderConfig cfg;
  auto params = encoder::InitParams(cfg);
  const int half = (cfg.ReceptiveField() - 1) / 2;
  const int t_len = 60, t0 = 30;
  int reach = 0;
  for (uint64_t trial = 0; trial < 5; ++trial) {
    FeatureSequence x = RandomFeatures(t_len, 80, 10 + trial);
    auto base = encoder::Encode(x, params, cfg);
    for (int d = 0; d < 80; ++d) x.values(t0, d) += 1.0;
    auto moved = encoder::Encode(x, params, cfg);
    for (int t = 0; t < t_len; ++t) {
      const double diff = (moved.values.row(t) - base.values.row(t)).cwiseAbs().maxCoeff();
      if (std::abs(t - t0) > half) {
        EXPECT_EQ(diff, 0.0) << "frame " << t;
      } else if (diff > 0) {
        reach = std::max(reach, std::abs(t - t0));
      }
    }
  }
  EXPECT_EQ(reach, half);
}

TEST(Encoder, GradientCheck) {
  EncoderConfig cfg;
  cfg.input_dim = 4;
  cfg.channels = 3;
  cfg.emb_dim = 4;
  auto params = encoder::InitParams(cfg);
  auto build = [&](nn::Graph& g, const std::vector<nn::Var>& in, const nn::ParameterSet& ps) {
    nn::Var y = encoder::Forward(g, ps, cfg, in[0]);
    return nn::SumAll(nn::Square(nn::AddScalar(y, 0.3)));
  };
  auto res = sidpt_test::CheckGradients(build, {RandomFeatures(8, 4, 3).values}, params);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

TEST(EncoderConfig, Validation) {
  EncoderConfig c;
  c.kernel = 4;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = EncoderConfig();
  c.num_blocks = 2;
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_EQ(EncoderConfig::FromJson(EncoderConfig().ToJson()), EncoderConfig());
  EXPECT_THROW(EncoderConfig::FromJson({{"layers", 3}}), ConfigError);
  EXPECT_THROW(EncoderConfig::FromJson({{"kernel", "three"}}), ConfigError);
}

}  // namespace
}  // namespace sidpt
