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

#ifndef SIDPT_TRAINER_DIA_TRAINER_H_
#define SIDPT_TRAINER_DIA_TRAINER_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/data/activity.h"
#include "sidpt/data/manifest.h"
#include "sidpt/data/rttm.h"
#include "sidpt/diarization/model.h"
#include "sidpt/metrics/der.h"
#include "sidpt/trainer/schedule.h"
#include "sidpt/trainer/sid_model.h"

namespace sidpt {

// One training chunk: mean-normalised features, the full reference and the
// powerset-reduced target on the feature frame grid.
struct DiaChunk {
  std::string file_id;
  int index = 0;
  Matrix features;
  ActivityMatrix reference;
  ActivityMatrix target;
};

// Non-overlapping chunks of chunk_seconds; a trailing partial chunk is
// dropped, and a recording shorter than one chunk becomes a single chunk.
std::vector<DiaChunk> ChunkRecording(const Waveform& wave, const std::vector<RttmRecord>& records,
                                     double chunk_seconds, const FeatureConfig& features,
                                     const PowersetCodec& codec, const std::string& file_id = "");

// Reads every manifest entry and chunks it.
std::vector<DiaChunk> LoadChunks(const std::vector<MixtureEntry>& entries, double chunk_seconds,
                                 const FeatureConfig& features, const PowersetCodec& codec);

struct DiaTrainConfig {
  DiarizationConfig model;
  ScheduleConfig schedule;
  double chunk = 10.0;  // seconds
  int average_k = 3;    // checkpoints averaged into the final model
  std::string out_dir;  // required: checkpoints and metrics.jsonl
  std::string tag = "dia";
};

struct DiaTrainResult {
  DiarizationModel model;  // average of the best checkpoints by DER
  std::vector<CheckpointMeta> checkpoints;
  std::vector<nlohmann::json> log;
};

// Chunk-level DER summed over chunks, powerset argmax decoding.
DerBreakdown ChunkDer(const DiarizationModel& model, const std::vector<DiaChunk>& chunks);

// Powerset training of every parameter of `init` on the chunks, one Adam
// step per batch_size chunks, validation DER after each epoch.
DiaTrainResult TrainDiarization(const DiaTrainConfig& cfg, DiarizationModel init,
                                const std::vector<DiaChunk>& train, const std::vector<DiaChunk>& val);

// From random initialisation.
DiaTrainResult PretrainDia(const DiaTrainConfig& cfg, const std::vector<DiaChunk>& train,
                           const std::vector<DiaChunk>& val);

// Keeps the encoder of an identification model, drops pooling and class
// table, and attaches a fresh backend. Throws CheckpointError when the
// encoder or feature settings differ from cfg.
DiarizationModel DiarizationFromSid(const SidModel& sid, const DiarizationConfig& cfg);

DiaTrainResult Finetune(const DiaTrainConfig& cfg, const SidModel& pretrained,
                        const std::vector<DiaChunk>& train, const std::vector<DiaChunk>& val);

}  // namespace sidpt

#endif  // SIDPT_TRAINER_DIA_TRAINER_H_
