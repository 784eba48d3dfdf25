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

#include "sidpt/pooling/pooling.h"

#include <cmath>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

void PoolingConfig::Validate() const {
  if (input_dim < 1 || attention_hidden < 1 || embedding_dim < 1) {
    throw ConfigError("pooling dimensions must be positive");
  }
  if (!(tau > 0 && tau < 1)) throw ConfigError("pooling.tau must be in (0, 1)");
  if (max_steps < 1) throw ConfigError("pooling.max_steps must be >= 1");
}

nlohmann::json PoolingConfig::ToJson() const {
  return {{"input_dim", input_dim},         {"attention_hidden", attention_hidden},
          {"embedding_dim", embedding_dim}, {"tau", tau},
          {"max_steps", max_steps},         {"seed", seed}};
}

PoolingConfig PoolingConfig::FromJson(const nlohmann::json& j) {
  CheckKnownKeys(j, {"input_dim", "attention_hidden", "embedding_dim", "tau", "max_steps", "seed"}, "pooling");
  PoolingConfig c;
  ReadKey(j, "input_dim", &c.input_dim, "pooling");
  ReadKey(j, "attention_hidden", &c.attention_hidden, "pooling");
  ReadKey(j, "embedding_dim", &c.embedding_dim, "pooling");
  ReadKey(j, "tau", &c.tau, "pooling");
  ReadKey(j, "max_steps", &c.max_steps, "pooling");
  ReadKey(j, "seed", &c.seed, "pooling");
  return c;
}

namespace pooling {

namespace {

// Floor applied to residuals from the second step on, so a step whose
// predecessor attended uniformly still has something to pool.
constexpr double kResidualFloor = 1e-6;

std::string N(const char* suffix) { return std::string(kPrefix) + suffix; }

}  // namespace

nn::ParameterSet InitParams(const PoolingConfig& cfg) {
  cfg.Validate();
  Rng rng(DeriveSeed(cfg.seed, 0x9001));
  const int d = cfg.input_dim, h = cfg.attention_hidden, e = cfg.embedding_dim;
  nn::ParameterSet p;
  p.Add(N("attention.w1"), nn::UniformFanIn(3 * d, h, 3 * d, rng));
  p.Add(N("attention.b1"), nn::UniformFanIn(1, h, 3 * d, rng));
  p.Add(N("attention.w2"), nn::UniformFanIn(h, 1, h, rng));
  p.Add(N("attention.b2"), Matrix::Zero(1, 1));
  p.Add(N("projection.weight"), nn::UniformFanIn(2 * d, e, 2 * d, rng));
  p.Add(N("projection.bias"), nn::UniformFanIn(1, e, 2 * d, rng));
  p.Add(N("existence.mass_weight"), Matrix::Constant(1, 1, 1.0));
  p.Add(N("existence.stats_weight"), nn::UniformFanIn(2 * d, 1, 2 * d, rng));
  p.Add(N("existence.bias"), Matrix::Zero(1, 1));
  return p;
}

nn::Var AttentionLogits(nn::Graph& g, const nn::ParameterSet& params, nn::Var e) {
  const int t_len = static_cast<int>(e.rows());
  nn::Var mean = nn::MeanRows(e);
  nn::Var var = nn::Sub(nn::MeanRows(nn::Square(e)), nn::Square(mean));
  nn::Var std = nn::Sqrt(var);
  nn::Var ctx = nn::ConcatCols({e, nn::BroadcastRows(mean, t_len), nn::BroadcastRows(std, t_len)});
  nn::Var hidden = nn::Tanh(
      nn::AddRowBroadcast(nn::MatMul(ctx, g.Param(params, N("attention.w1"))),
                          g.Param(params, N("attention.b1"))));
  return nn::AddRowBroadcast(nn::MatMul(hidden, g.Param(params, N("attention.w2"))),
                             g.Param(params, N("attention.b2")));
}

nn::Var Project(nn::Graph& g, const nn::ParameterSet& params, nn::Var stats) {
  return nn::AddRowBroadcast(nn::MatMul(stats, g.Param(params, N("projection.weight"))),
                             g.Param(params, N("projection.bias")));
}

StepVars PoolStep(nn::Graph& g, const nn::ParameterSet& params, nn::Var e, nn::Var logits,
                  nn::Var residual, nn::Var mass_residual) {
  StepVars s;
  s.attention = nn::MaskedSoftmaxCol(logits, residual);
  nn::Var at = nn::Transpose(s.attention);
  nn::Var mu = nn::MatMul(at, e);
  nn::Var second = nn::MatMul(at, nn::Square(e));
  nn::Var sigma = nn::Sqrt(nn::Sub(second, nn::Square(mu)));
  s.stats = nn::ConcatCols({mu, sigma});
  s.embedding = Project(g, params, s.stats);

  nn::Var unmasked = nn::SoftmaxCol(logits);
  nn::Var mass = nn::SumAll(nn::Mul(mass_residual, unmasked));
  nn::Var logit = nn::Add(nn::MulScalar(mass, g.Param(params, N("existence.mass_weight"))),
                          nn::MatMul(s.stats, g.Param(params, N("existence.stats_weight"))));
  s.existence_logit = nn::Add(logit, g.Param(params, N("existence.bias")));
  return s;
}

std::vector<StepVars> RecursivePoolGraph(nn::Graph& g, const nn::ParameterSet& params,
                                         const PoolingConfig& cfg, nn::Var e) {
  if (e.rows() < 1) throw ShapeError("recursive pooling needs at least one frame");
  nn::Var logits = AttentionLogits(g, params, e);
  nn::Var residual = g.Constant(Matrix::Ones(e.rows(), 1));
  std::vector<StepVars> steps;
  for (int s = 0; s < cfg.max_steps; ++s) {
    nn::Var pool_weights =
        s == 0 ? residual : nn::AddScalar(nn::Scale(residual, 1.0 - kResidualFloor), kResidualFloor);
    StepVars step = PoolStep(g, params, e, logits, pool_weights, residual);
    steps.push_back(step);
    if (s + 1 < cfg.max_steps) {
      nn::Var peak = nn::MaxAll(step.attention);
      residual = nn::Mul(residual, nn::OneMinus(nn::DivScalar(step.attention, peak)));
    }
  }
  return steps;
}

namespace {

double SigmoidOf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

PooledEmbedding ToValue(const StepVars& s) {
  PooledEmbedding p;
  p.stats = s.stats.value().row(0);
  p.embedding = s.embedding.value().row(0);
  p.attention = s.attention.value().col(0);
  p.existence_prob = SigmoidOf(s.existence_logit.scalar());
  return p;
}

}  // namespace

PooledEmbedding AttentiveStatsPool(const FrameEmbeddingSequence& e, const ColVector& residual,
                                   const nn::ParameterSet& params) {
  if (residual.size() != e.values.rows()) throw ShapeError("residual length differs from T");
  for (Eigen::Index t = 0; t < residual.size(); ++t) {
    if (!(residual(t) >= 0.0 && residual(t) <= 1.0)) {
      throw DegenerateInputError("residual weights must lie in [0, 1]");
    }
  }
  if (!(residual.sum() > 0.0)) throw DegenerateInputError("residual weights are all zero");
  nn::Graph g(false);
  nn::Var ev = g.Constant(e.values);
  nn::Var r = g.Constant(residual);
  StepVars s = PoolStep(g, params, ev, AttentionLogits(g, params, ev), r, r);
  return ToValue(s);
}

RowVector Project(const RowVector& stats, const nn::ParameterSet& params) {
  const Matrix& w = params.Get(N("projection.weight"));
  if (stats.size() != w.rows()) throw ShapeError("stats dimension does not match projection");
  return stats * w + params.Get(N("projection.bias")).row(0);
}

std::vector<PooledEmbedding> RecursivePool(const FrameEmbeddingSequence& e,
                                           const nn::ParameterSet& params,
                                           const PoolingConfig& cfg) {
  nn::Graph g(false);
  std::vector<PooledEmbedding> out;
  for (const auto& s : RecursivePoolGraph(g, params, cfg, g.Constant(e.values))) {
    out.push_back(ToValue(s));
  }
  return out;
}

std::vector<ColVector> RecursiveResiduals(const FrameEmbeddingSequence& e,
                                          const nn::ParameterSet& params,
                                          const PoolingConfig& cfg) {
  std::vector<ColVector> out;
  ColVector r = ColVector::Ones(e.values.rows());
  out.push_back(r);
  for (const auto& step : RecursivePool(e, params, cfg)) {
    const double peak = step.attention.maxCoeff();
    r = r.cwiseProduct((1.0 - (step.attention / peak).array()).matrix());
    out.push_back(r);
  }
  return out;
}

int CountSpeakers(const std::vector<PooledEmbedding>& steps, double tau) {
  int k = 0;
  for (const auto& s : steps) {
    if (s.existence_prob < tau) break;
    ++k;
  }
  return k;
}

}  // namespace pooling
}  // namespace sidpt
