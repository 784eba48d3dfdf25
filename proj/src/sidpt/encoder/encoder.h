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

#ifndef SIDPT_ENCODER_ENCODER_H_
#define SIDPT_ENCODER_ENCODER_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/features/logmel.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/parameters.h"

namespace sidpt {

// Reduced ECAPA-style frame encoder: 1x1 input projection, residual dilated
// TDNN blocks, concatenation of all block outputs, 1x1 projection to D.
struct EncoderConfig {
  int input_dim = 80;
  int channels = 64;
  int emb_dim = 64;
  int num_blocks = 3;
  std::vector<int> dilations = {1, 2, 3};
  int kernel = 3;
  uint64_t seed = 0;

  void Validate() const;
  // Frames of input that can influence one output frame.
  int ReceptiveField() const;

  nlohmann::json ToJson() const;
  static EncoderConfig FromJson(const nlohmann::json& j);
  bool operator==(const EncoderConfig&) const = default;
};

// T x D frame embeddings; T equals the input frame count.
struct FrameEmbeddingSequence {
  Matrix values;
  int num_frames() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

namespace encoder {

inline constexpr const char* kPrefix = "encoder.";

// Seeded uniform fan-in initialisation of every "encoder.*" parameter.
nn::ParameterSet InitParams(const EncoderConfig& cfg);

// Differentiable forward. x is T x input_dim.
nn::Var Forward(nn::Graph& graph, const nn::ParameterSet& params, const EncoderConfig& cfg,
                nn::Var x);

// Inference helper. Throws ShapeError on feature-dimension mismatch.
FrameEmbeddingSequence Encode(const FeatureSequence& x, const nn::ParameterSet& params,
                              const EncoderConfig& cfg);

}  // namespace encoder
}  // namespace sidpt

#endif  // SIDPT_ENCODER_ENCODER_H_
