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

#ifndef SIDPT_DIARIZATION_MODEL_H_
#define SIDPT_DIARIZATION_MODEL_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/encoder/encoder.h"
#include "sidpt/features/logmel.h"
#include "sidpt/losses/powerset.h"
#include "sidpt/nn/checkpoint.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/parameters.h"

namespace sidpt {

// Recurrent layer over frame embeddings followed by a linear layer to the
// powerset logits.
struct BackendConfig {
  int input_dim = 64;
  int hidden = 64;
  bool bidirectional = true;
  int num_classes = 11;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static BackendConfig FromJson(const nlohmann::json& j);
};

// Per-frame class probabilities of one window. Rows sum to one.
struct PosteriorMatrix {
  Matrix values;           // T x K
  int start_frame = 0;     // offset of row 0 in the recording
  double frame_shift = 0.01;

  int num_frames() const { return static_cast<int>(values.rows()); }
  double window_offset() const { return start_frame * frame_shift; }
};

namespace backend {

inline constexpr const char* kPrefix = "backend.";

// backend.lstm.{fwd,bwd}.{w_ih,w_hh,bias} and backend.output.{weight,bias}.
nn::ParameterSet InitParams(const BackendConfig& cfg);

// T x D embeddings -> T x K logits.
nn::Var Forward(nn::Graph& g, const nn::ParameterSet& params, const BackendConfig& cfg, nn::Var e);

}  // namespace backend

// Softmax of the backend logits; T is preserved.
PosteriorMatrix BackendForward(const FrameEmbeddingSequence& e, const nn::ParameterSet& params,
                               const BackendConfig& cfg);

struct DiarizationConfig {
  FeatureConfig features;
  EncoderConfig encoder;
  BackendConfig backend;
  int max_speakers = 4;
  int max_overlap = 2;

  // Throws ConfigError when the pieces do not fit together.
  void Validate() const;
  PowersetCodec Codec() const { return PowersetCodec(max_speakers, max_overlap); }
  nlohmann::json ToJson() const;
  static DiarizationConfig FromJson(const nlohmann::json& j);
};

struct DiarizationModel {
  DiarizationConfig config;
  nn::ParameterSet params;  // encoder.* and backend.*
};

// Fresh encoder and backend parameters.
DiarizationModel InitDiarizationModel(const DiarizationConfig& cfg);

// Log-mel features with per-sequence mean normalisation.
FeatureSequence ModelFeatures(const Waveform& wave, const FeatureConfig& cfg);

// Features (T x num_mels) -> logits (T x K).
nn::Var DiarizationLogits(nn::Graph& g, const DiarizationModel& model, nn::Var features);

// Posteriors of a feature block, evaluated without gradient tracking.
PosteriorMatrix DiarizationPosteriors(const DiarizationModel& model, const Matrix& features);

void SaveDiarizationModel(const std::string& path, const DiarizationModel& model,
                          const nlohmann::json& meta = nlohmann::json::object());
// Throws CheckpointError when the file is not a diarization checkpoint.
DiarizationModel LoadDiarizationModel(const std::string& path);

}  // namespace sidpt

#endif  // SIDPT_DIARIZATION_MODEL_H_
