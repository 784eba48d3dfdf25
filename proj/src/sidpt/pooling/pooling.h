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

#ifndef SIDPT_POOLING_POOLING_H_
#define SIDPT_POOLING_POOLING_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/encoder/encoder.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/parameters.h"

namespace sidpt {

struct PoolingConfig {
  int input_dim = 64;        // D of the frame embeddings
  int attention_hidden = 64;
  int embedding_dim = 192;
  double tau = 0.5;          // existence threshold for speaker counting
  int max_steps = 2;         // S_max
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static PoolingConfig FromJson(const nlohmann::json& j);
};

struct PooledEmbedding {
  RowVector stats;      // mean (+) std, 2D
  RowVector embedding;  // projected speaker embedding
  ColVector attention;  // T weights on the simplex
  double existence_prob = 0.0;
};

namespace pooling {

inline constexpr const char* kPrefix = "pooling.";

// Parameter names:
//   pooling.attention.{w1,b1,w2,b2}   context MLP, shared across steps
//   pooling.projection.{weight,bias}  2D -> embedding_dim
//   pooling.existence.{mass_weight,stats_weight,bias}
nn::ParameterSet InitParams(const PoolingConfig& cfg);

// Graph-level pieces, exposed for training and gradient checks.
struct StepVars {
  nn::Var attention;        // T x 1
  nn::Var stats;            // 1 x 2D
  nn::Var embedding;        // 1 x E
  nn::Var existence_logit;  // 1 x 1
};

// Attention logits from [e_t (+) global mean (+) global std]; T x 1.
nn::Var AttentionLogits(nn::Graph& g, const nn::ParameterSet& params, nn::Var e);

// One pooling step with the given residual weights (T x 1, in [0, 1]).
// `mass_residual` is used for the existence head's residual mass
// sum_t mass_residual_t * softmax(logits)_t.
StepVars PoolStep(nn::Graph& g, const nn::ParameterSet& params, nn::Var e, nn::Var logits,
                  nn::Var residual, nn::Var mass_residual);

nn::Var Project(nn::Graph& g, const nn::ParameterSet& params, nn::Var stats);

// Always returns cfg.max_steps steps.
std::vector<StepVars> RecursivePoolGraph(nn::Graph& g, const nn::ParameterSet& params,
                                         const PoolingConfig& cfg, nn::Var e);

// Value-level API.

// Throws DegenerateInputError when the residual is all zero, and
// ShapeError when its length differs from T.
PooledEmbedding AttentiveStatsPool(const FrameEmbeddingSequence& e, const ColVector& residual,
                                   const nn::ParameterSet& params);

// v = stats * W + b. No normalisation.
RowVector Project(const RowVector& stats, const nn::ParameterSet& params);

std::vector<PooledEmbedding> RecursivePool(const FrameEmbeddingSequence& e,
                                           const nn::ParameterSet& params,
                                           const PoolingConfig& cfg);

// residual^0 (all ones) through residual^{max_steps}.
std::vector<ColVector> RecursiveResiduals(const FrameEmbeddingSequence& e,
                                          const nn::ParameterSet& params,
                                          const PoolingConfig& cfg);

// Longest prefix whose existence probabilities are all >= tau.
int CountSpeakers(const std::vector<PooledEmbedding>& steps, double tau);

}  // namespace pooling
}  // namespace sidpt

#endif  // SIDPT_POOLING_POOLING_H_
