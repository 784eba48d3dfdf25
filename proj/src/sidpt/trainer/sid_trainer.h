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

#ifndef SIDPT_TRAINER_SID_TRAINER_H_
#define SIDPT_TRAINER_SID_TRAINER_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/mixing/mixing.h"
#include "sidpt/trainer/schedule.h"
#include "sidpt/trainer/sid_model.h"

namespace sidpt {

struct SidPretrainConfig {
  SidModelConfig model;
  MixBatchConfig mixing;
  ScheduleConfig schedule;
  int val_count_batches = 4;
  std::string out_dir;  // checkpoints and metrics.jsonl; empty keeps nothing on disk
};

struct SidTrainData {
  std::vector<LabeledWave> train;
  std::vector<LabeledWave> val;
  std::vector<Waveform> noises;
};

struct SidEvaluation {
  double id_accuracy = 0.0;     // single-speaker validation utterances
  double count_accuracy = 0.0;  // {0,1,2}-speaker validation batches
};

struct SidPretrainResult {
  SidModel model;  // parameters after the last epoch
  std::vector<CheckpointMeta> checkpoints;
  std::vector<nlohmann::json> log;  // one row per epoch
  SidEvaluation final_eval;
};

// Loss of one minibatch: mean AAM cross-entropy plus count_weight times the
// mean counting loss.
nn::Var SidBatchLoss(nn::Graph& g, const SidModel& model, const SidBatch& batch,
                     const std::vector<int>& class_of_speaker_index, double* sid_part = nullptr,
                     double* count_part = nullptr);

SidEvaluation EvaluateSid(const SidModel& model, const std::vector<LabeledWave>& val,
                          const std::vector<Waveform>& noises, const MixBatchConfig& mixing,
                          int count_batches, uint64_t seed);

// Multi-speaker identification pretraining with in-batch dynamic mixing.
// Each epoch runs steps_per_epoch Adam steps, then validates; the
// validation metric is identification accuracy. Throws TrainingError on a
// non-finite loss, naming the batch seed.
SidPretrainResult PretrainSid(const SidPretrainConfig& cfg, const SidTrainData& data);

}  // namespace sidpt

#endif  // SIDPT_TRAINER_SID_TRAINER_H_
