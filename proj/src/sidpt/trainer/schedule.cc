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

#include "sidpt/trainer/schedule.h"

#include <algorithm>
#include <cmath>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/nn/checkpoint.h"

namespace sidpt {

void ScheduleConfig::Validate() const {
  if (!(peak_lr > 0)) throw ConfigError("schedule.peak_lr must be positive");
  if (!(decay_per_epoch > 0 && decay_per_epoch <= 1)) {
    throw ConfigError("schedule.decay_per_epoch must lie in (0, 1]");
  }
  if (warmup_iters < 1) throw ConfigError("schedule.warmup_iters must be >= 1");
  if (epochs < 1 || steps_per_epoch < 1 || batch_size < 1) {
    throw ConfigError("schedule: epochs, steps_per_epoch and batch_size must be >= 1");
  }
  if (grad_clip < 0) throw ConfigError("schedule.grad_clip must be >= 0");
}

nlohmann::json ScheduleConfig::ToJson() const {
  return {{"peak_lr", peak_lr},
          {"warmup_iters", warmup_iters},
          {"decay_per_epoch", decay_per_epoch},
          {"epochs", epochs},
          {"steps_per_epoch", steps_per_epoch},
          {"batch_size", batch_size},
          {"grad_clip", grad_clip},
          {"adam_beta1", adam.beta1},
          {"adam_beta2", adam.beta2},
          {"adam_eps", adam.eps},
          {"seed", seed}};
}

ScheduleConfig ScheduleConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "schedule";
  CheckKnownKeys(j, {"peak_lr", "warmup_iters", "decay_per_epoch", "epochs", "steps_per_epoch",
                     "batch_size", "grad_clip", "adam_beta1", "adam_beta2", "adam_eps", "seed"},
                 sec);
  ScheduleConfig c;
  ReadKey(j, "peak_lr", &c.peak_lr, sec);
  ReadKey(j, "warmup_iters", &c.warmup_iters, sec);
  ReadKey(j, "decay_per_epoch", &c.decay_per_epoch, sec);
  ReadKey(j, "epochs", &c.epochs, sec);
  ReadKey(j, "steps_per_epoch", &c.steps_per_epoch, sec);
  ReadKey(j, "batch_size", &c.batch_size, sec);
  ReadKey(j, "grad_clip", &c.grad_clip, sec);
  ReadKey(j, "adam_beta1", &c.adam.beta1, sec);
  ReadKey(j, "adam_beta2", &c.adam.beta2, sec);
  ReadKey(j, "adam_eps", &c.adam.eps, sec);
  ReadKey(j, "seed", &c.seed, sec);
  c.Validate();
  return c;
}

double LrSchedule(long global_step, int epoch, const ScheduleConfig& cfg) {
  const double warm = std::min(1.0, static_cast<double>(global_step) / cfg.warmup_iters);
  return cfg.peak_lr * std::pow(cfg.decay_per_epoch, epoch) * warm;
}

std::vector<CheckpointMeta> BestCheckpoints(std::vector<CheckpointMeta> metas, int k, MetricGoal goal) {
  for (const auto& m : metas) {
    if (!std::isfinite(m.val_metric)) throw CheckpointError(m.path + ": non-finite metric");
  }
  std::stable_sort(metas.begin(), metas.end(), [goal](const CheckpointMeta& a, const CheckpointMeta& b) {
    return goal == MetricGoal::kMinimize ? a.val_metric < b.val_metric : a.val_metric > b.val_metric;
  });
  if (static_cast<int>(metas.size()) > k) metas.resize(static_cast<size_t>(k));
  return metas;
}

nn::ParameterSet AverageCheckpoints(const std::vector<CheckpointMeta>& metas, int k, MetricGoal goal,
                                    nlohmann::json* config) {
  if (k < 1) throw CheckpointError("k must be >= 1");
  if (static_cast<int>(metas.size()) < k) {
    throw CheckpointError("need " + std::to_string(k) + " checkpoints, have " + std::to_string(metas.size()));
  }
  const auto best = BestCheckpoints(metas, k, goal);
  nn::ParameterSet sum;
  for (size_t i = 0; i < best.size(); ++i) {
    nn::Checkpoint ckpt = nn::LoadCheckpoint(best[i].path);
    if (i == 0) {
      sum = ckpt.params;
      if (config != nullptr) *config = ckpt.config;
      continue;
    }
    if (ckpt.params.size() != sum.size()) throw CheckpointError(best[i].path + ": tensor set differs");
    for (auto& [name, value] : sum.entries()) {
      if (!ckpt.params.Has(name)) throw CheckpointError(best[i].path + ": missing tensor " + name);
      const Matrix& v = ckpt.params.Get(name);
      if (v.rows() != value.rows() || v.cols() != value.cols()) {
        throw CheckpointError(best[i].path + ": shape mismatch for " + name);
      }
      value += v;
    }
  }
  for (auto& [name, value] : sum.entries()) value /= static_cast<double>(best.size());
  return sum;
}

double ClipGradNorm(nn::ParameterSet* grads, double max_norm) {
  double sq = 0.0;
  for (const auto& [name, g] : grads->entries()) sq += g.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && norm > max_norm) {
    for (auto& [name, g] : grads->entries()) g *= max_norm / norm;
  }
  return norm;
}

}  // namespace sidpt
