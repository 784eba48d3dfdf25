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

#ifndef SIDPT_TRAINER_SCHEDULE_H_
#define SIDPT_TRAINER_SCHEDULE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/nn/adam.h"
#include "sidpt/nn/parameters.h"

namespace sidpt {

struct ScheduleConfig {
  double peak_lr = 1e-3;
  int warmup_iters = 1000;
  double decay_per_epoch = 0.8;
  int epochs = 30;
  int steps_per_epoch = 100;  // identification pretraining only
  int batch_size = 32;        // diarization chunks per step
  double grad_clip = 0.0;     // max global gradient norm; 0 disables
  nn::AdamConfig adam;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static ScheduleConfig FromJson(const nlohmann::json& j);
};

// peak_lr * decay^epoch * min(1, step / warmup_iters); step counts from 1.
double LrSchedule(long global_step, int epoch, const ScheduleConfig& cfg);

struct CheckpointMeta {
  int epoch = 0;
  double val_metric = 0.0;
  std::string path;
};

enum class MetricGoal { kMinimize, kMaximize };

// Element-wise mean of the parameters of the k best checkpoints. Tensors
// are matched by name. Throws CheckpointError for fewer than k checkpoints,
// non-finite metrics, or mismatched names or shapes.
nn::ParameterSet AverageCheckpoints(const std::vector<CheckpointMeta>& metas, int k, MetricGoal goal,
                                    nlohmann::json* config = nullptr);

// The k best metas, best first; ties keep the earlier epoch.
std::vector<CheckpointMeta> BestCheckpoints(std::vector<CheckpointMeta> metas, int k, MetricGoal goal);

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradNorm(nn::ParameterSet* grads, double max_norm);

}  // namespace sidpt

#endif  // SIDPT_TRAINER_SCHEDULE_H_
