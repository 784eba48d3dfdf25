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

#ifndef SIDPT_LOSSES_SID_LOSS_H_
#define SIDPT_LOSSES_SID_LOSS_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/parameters.h"

namespace sidpt {

// Additive angular margin softmax over a table of class directions.
struct SidLossConfig {
  int num_classes = 0;
  int embedding_dim = 192;
  double margin = 0.2;  // radians
  double scale = 30.0;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SidLossConfig FromJson(const nlohmann::json& j);
};

namespace sid_loss {

inline constexpr const char* kWeightName = "sid.weight";  // embedding_dim x num_classes

nn::ParameterSet InitParams(const SidLossConfig& cfg);
// Rescales every column of sid.weight to unit norm.
void NormalizeColumns(nn::ParameterSet* params);

// One sample's contribution: 1 label uses embeddings[0]; 2 labels are
// matched to embeddings[0..1] by the cheaper of the two assignments; 0
// labels contribute nothing.
struct Sample {
  std::vector<nn::Var> embeddings;  // each 1 x embedding_dim
  std::vector<int> labels;
};

// Mean AAM cross-entropy over all contributions. Throws LabelError for
// labels outside the class table. *chosen_identity (if given) receives, per
// two-speaker sample, whether the identity matching was chosen.
nn::Var LossGraph(nn::Graph& g, const nn::ParameterSet& params, const SidLossConfig& cfg,
                  const std::vector<Sample>& samples, int* contributions = nullptr,
                  std::vector<bool>* chosen_identity = nullptr);

// Value-level form over plain vectors.
double Loss(const std::vector<std::vector<RowVector>>& embeddings,
            const std::vector<std::vector<int>>& labels, const nn::ParameterSet& params,
            const SidLossConfig& cfg);

// Cosine of each embedding with each (normalised) class column; N x C.
Matrix Cosines(const Matrix& embeddings, const nn::ParameterSet& params);

}  // namespace sid_loss

// Mean BCE of existence probabilities against 1[s <= true_count].
double CountingLoss(const std::vector<double>& existence_probs, int true_count);
// Same objective from existence logits, computed stably.
nn::Var CountingLossGraph(const std::vector<nn::Var>& existence_logits, int true_count);

}  // namespace sidpt

#endif  // SIDPT_LOSSES_SID_LOSS_H_
