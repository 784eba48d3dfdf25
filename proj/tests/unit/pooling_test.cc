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
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sidpt/common/error.h"
#include "sidpt/losses/sid_loss.h"
#include "sidpt/nn/adam.h"
#include "sidpt/nn/ops.h"
#include "sidpt/pooling/pooling.h"

namespace sidpt {
namespace {

Matrix RandomMatrix(int r, int c, uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

PoolingConfig SmallConfig(int d = 4) {
  PoolingConfig cfg;
  cfg.input_dim = d;
  cfg.attention_hidden = 5;
  cfg.embedding_dim = 3;
  cfg.max_steps = 2;
  return cfg;
}

TEST(AttentiveStatsPool, IdenticalFramesZeroVariance) {
  PoolingConfig cfg = SmallConfig();
  auto params = pooling::InitParams(cfg);
  RowVector u = RandomMatrix(1, 4, 1).row(0);
  FrameEmbeddingSequence e{u.replicate(12, 1)};
  PooledEmbedding p = pooling::AttentiveStatsPool(e, ColVector::Ones(12), params);
  for (int d = 0; d < 4; ++d) {
    EXPECT_NEAR(p.stats(d), u(d), 1e-12);
    EXPECT_NEAR(p.stats(4 + d), 0.0, 1e-6);
  }
}

TEST(AttentiveStatsPool, SingleFrame) {
  auto params = pooling::InitParams(SmallConfig());
  FrameEmbeddingSequence e{RandomMatrix(1, 4, 2)};
  PooledEmbedding p = pooling::AttentiveStatsPool(e, ColVector::Ones(1), params);
  EXPECT_DOUBLE_EQ(p.attention(0), 1.0);
  for (int d = 0; d < 4; ++d) EXPECT_NEAR(p.stats(d), e.values(0, d), 1e-12);
}

TEST(AttentiveStatsPool, ResidualMask) {
  auto params = pooling::InitParams(SmallConfig());
  FrameEmbeddingSequence e{RandomMatrix(30, 4, 3)};
  ColVector r = ColVector::Zero(30);
  r.head(10).setOnes();
  PooledEmbedding p = pooling::AttentiveStatsPool(e, r, params);
  EXPECT_EQ(p.attention.tail(20).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(p.attention.sum(), 1.0, 1e-12);
  EXPECT_THROW(pooling::AttentiveStatsPool(e, ColVector::Zero(30), params), DegenerateInputError);
  EXPECT_THROW(pooling::AttentiveStatsPool(e, ColVector::Ones(29), params), ShapeError);
  ColVector bad = ColVector::Ones(30);
  bad(3) = 1.5;
  EXPECT_THROW(pooling::AttentiveStatsPool(e, bad, params), DegenerateInputError);
}

TEST(Project, IdentityAndZero) {
  PoolingConfig cfg = SmallConfig(2);
  cfg.embedding_dim = 4;
  auto params = pooling::InitParams(cfg);
  params.Get("pooling.projection.weight") = Matrix::Identity(4, 4);
  params.Get("pooling.projection.bias").setZero();
  RowVector stats = RandomMatrix(1, 4, 4).row(0);
  EXPECT_EQ(pooling::Project(stats, params), stats);
  EXPECT_EQ(pooling::Project(RowVector::Zero(4), params), RowVector::Zero(4));
  EXPECT_THROW(pooling::Project(RowVector::Zero(3), params), ShapeError);
}

TEST(RecursivePool, SingleStepEqualsAttentiveStatsPool) {
  PoolingConfig cfg = SmallConfig();
  cfg.max_steps = 1;
  auto params = pooling::InitParams(cfg);
  FrameEmbeddingSequence e{RandomMatrix(15, 4, 5)};
  auto steps = pooling::RecursivePool(e, params, cfg);
  ASSERT_EQ(steps.size(), 1u);
  PooledEmbedding direct = pooling::AttentiveStatsPool(e, ColVector::Ones(15), params);
  EXPECT_EQ(steps[0].embedding, direct.embedding);
  EXPECT_EQ(steps[0].attention, direct.attention);
  EXPECT_EQ(steps[0].existence_prob, direct.existence_prob);
}

TEST(RecursivePool, SimplexAndMonotoneResiduals) {
  PoolingConfig cfg = SmallConfig();
  cfg.max_steps = 3;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    cfg.seed = trial;
    auto params = pooling::InitParams(cfg);
    const int t_len = std::uniform_int_distribution<int>(1, 40)(rng);
    FrameEmbeddingSequence e{RandomMatrix(t_len, 4, 1000 + trial, 2.0)};
    for (const auto& s : pooling::RecursivePool(e, params, cfg)) {
      EXPECT_NEAR(s.attention.sum(), 1.0, 1e-5);
      EXPECT_GE(s.attention.minCoeff(), 0.0);
      EXPECT_GT(s.existence_prob, 0.0);
      EXPECT_LT(s.existence_prob, 1.0);
    }
    auto res = pooling::RecursiveResiduals(e, params, cfg);
    ASSERT_EQ(res.size(), 4u);
    for (size_t k = 1; k < res.size(); ++k) {
      for (int t = 0; t < t_len; ++t) {
        EXPECT_LE(res[k](t), res[k - 1](t));
        EXPECT_GE(res[k](t), 0.0);
      }
    }
  }
}

TEST(CountSpeakers, PrefixRule) {
  auto steps = [](std::vector<double> probs) {
    std::vector<PooledEmbedding> out(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) out[i].existence_prob = probs[i];
    return out;
  };
  EXPECT_EQ(pooling::CountSpeakers(steps({0.9, 0.8}), 0.5), 2);
  EXPECT_EQ(pooling::CountSpeakers(steps({0.9, 0.1}), 0.5), 1);
  EXPECT_EQ(pooling::CountSpeakers(steps({0.2, 0.9}), 0.5), 0);
}

TEST(PoolingGradients, StatsPoolProjectCosine) {
  PoolingConfig cfg = SmallConfig();
  auto params = pooling::InitParams(cfg);
  const Matrix target = RandomMatrix(1, cfg.embedding_dim, 6);
  const Matrix residual = (Matrix(8, 1) << 1, 0.9, 0.2, 0.7, 1, 0.5, 0.3, 0.8).finished();
  auto build = [&](nn::Graph& g, const std::vector<nn::Var>& in, const nn::ParameterSet& ps) {
    nn::Var r = g.Constant(residual);
    pooling::StepVars s =
        pooling::PoolStep(g, ps, in[0], pooling::AttentionLogits(g, ps, in[0]), r, r);
    nn::Var a = nn::NormalizeRows(s.embedding);
    nn::Var b = nn::NormalizeRows(g.Constant(target));
    return nn::SumAll(nn::Mul(a, b));
  };
  auto res = sidpt_test::CheckGradients(build, {RandomMatrix(8, 4, 7)}, params);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

TEST(PoolingGradients, RecursiveExistenceHead) {
  PoolingConfig cfg = SmallConfig();
  auto params = pooling::InitParams(cfg);
  auto build = [&](nn::Graph& g, const std::vector<nn::Var>& in, const nn::ParameterSet& ps) {
    auto steps = pooling::RecursivePoolGraph(g, ps, cfg, in[0]);
    return CountingLossGraph({steps[0].existence_logit, steps[1].existence_logit}, 1);
  };
  auto res = sidpt_test::CheckGradients(build, {RandomMatrix(8, 4, 9)}, params);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

// Frame groups with orthogonal embeddings, one per speaker. Projection and
// class table are fixed so the embedding is the attended mean and each
// class is one group axis; only the attention head is trained, with the
// identification loss naming both speakers of random two-group sequences.
TEST(RecursivePool, ToyHeadSeparatesGroups) {
  const int d = 4, half = 10, speakers = 4;
  PoolingConfig cfg;
  cfg.input_dim = d;
  cfg.attention_hidden = 8;
  cfg.embedding_dim = d;
  cfg.max_steps = 2;
  cfg.seed = 3;
  SidLossConfig sid;
  sid.num_classes = speakers;
  sid.embedding_dim = d;
  sid.scale = 3.0;
  nn::ParameterSet params = pooling::InitParams(cfg);
  params.Get("pooling.projection.weight") = Matrix::Zero(2 * d, d);
  params.Get("pooling.projection.weight").topRows(d) = Matrix::Identity(d, d);
  params.Get("pooling.projection.bias").setZero();
  params.Add(sid_loss::kWeightName, Matrix::Identity(d, speakers));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.05);
  auto group = [&](int which, int n) {
    Matrix m = Matrix::Zero(n, d);
    for (int t = 0; t < n; ++t) {
      m(t, which) = 1.0;
      for (int k = 0; k < d; ++k) m(t, k) += noise(rng);
    }
    return m;
  };
  auto mix = [&](int a, int b) {
    Matrix m(2 * half, d);
    m << group(a, half), group(b, half);
    return m;
  };
  nn::Adam adam;
  for (int step = 0; step < 1000; ++step) {
    nn::Graph g;
    std::vector<sid_loss::Sample> samples;
    for (int a = 0; a < speakers; ++a) {
      const int b = (a + 1 + step % (speakers - 1)) % speakers;
      auto steps = pooling::RecursivePoolGraph(g, params, cfg, g.Constant(mix(a, b)));
      samples.push_back({{steps[0].embedding, steps[1].embedding}, {a, b}});
    }
    g.Backward(sid_loss::LossGraph(g, params, sid, samples));
    adam.Step(&params, g.ParamGrads().WithPrefix("pooling.attention."), 0.03);
  }
  for (int a = 0; a < speakers; ++a) {
    const int b = (a + 2) % speakers;
    auto steps = pooling::RecursivePool(FrameEmbeddingSequence{mix(a, b)}, params, cfg);
    const double a0 = steps[0].attention.head(half).sum();
    const double a1 = steps[1].attention.head(half).sum();
    const double first = std::max(a0, 1 - a0);
    const double second = a0 >= 0.5 ? 1 - a1 : a1;
    EXPECT_GE(first, 0.8) << a << "+" << b;
    EXPECT_GE(second, 0.8) << a << "+" << b;
  }
}

TEST(PoolingConfig, Validation) {
  PoolingConfig c;
  c.tau = 1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = PoolingConfig();
  c.max_steps = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_EQ(PoolingConfig::FromJson(PoolingConfig().ToJson()).ToJson(), PoolingConfig().ToJson());
  EXPECT_THROW(PoolingConfig::FromJson({{"steps", 2}}), ConfigError);
}

}  // namespace
}  // namespace sidpt
