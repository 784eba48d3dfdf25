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

#ifndef SIDPT_TRAINER_SID_MODEL_H_
#define SIDPT_TRAINER_SID_MODEL_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/data/waveform.h"
#include "sidpt/encoder/encoder.h"
#include "sidpt/features/logmel.h"
#include "sidpt/losses/sid_loss.h"
#include "sidpt/nn/parameters.h"
#include "sidpt/pooling/pooling.h"

namespace sidpt {

// Encoder + recursive pooling + class table. sid.num_classes is filled in
// from the training speakers.
struct SidModelConfig {
  FeatureConfig features;
  EncoderConfig encoder;
  PoolingConfig pooling;
  SidLossConfig sid;
  double count_weight = 1.0;  // weight of the counting loss

  void Validate() const;
  nlohmann::json ToJson() const;
  static SidModelConfig FromJson(const nlohmann::json& j);
};

struct SidModel {
  SidModelConfig config;
  std::vector<int> class_speakers;  // speaker id of each class column
  nn::ParameterSet params;          // encoder.*, pooling.*, sid.*
};

SidModel InitSidModel(SidModelConfig cfg, std::vector<int> class_speakers);

void SaveSidModel(const std::string& path, const SidModel& model,
                  const nlohmann::json& meta = nlohmann::json::object());
// Throws CheckpointError when the file is not an identification checkpoint.
SidModel LoadSidModel(const std::string& path);

// Recursive pooling outputs of a whole recording.
std::vector<PooledEmbedding> PoolRecording(const SidModel& model, const Waveform& wave);

// Speaker embeddings of a recording: the first max(count, 1) pooled
// embeddings, capped at max_embeddings.
std::vector<RowVector> SpeakerEmbeddings(const SidModel& model, const Waveform& wave, int max_embeddings);

// Speaker id of the class closest (cosine) to the first pooled embedding.
int IdentifySpeaker(const SidModel& model, const Waveform& wave);

}  // namespace sidpt

#endif  // SIDPT_TRAINER_SID_MODEL_H_
