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

#ifndef SIDPT_CLI_RUN_CONFIG_H_
#define SIDPT_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/data/synth_corpus.h"
#include "sidpt/diarization/inference.h"
#include "sidpt/diarization/model.h"
#include "sidpt/mixing/mixing.h"
#include "sidpt/simulate/simulate.h"
#include "sidpt/trainer/schedule.h"
#include "sidpt/trainer/sid_model.h"

namespace sidpt {

inline constexpr int kRunConfigVersion = 1;

// Every pipeline setting in one document. Unknown keys are rejected at
// every level.
struct RunConfig {
  int version = kRunConfigVersion;
  uint64_t seed = 0;
  std::string output_dir;

  FeatureConfig features;
  EncoderConfig encoder;
  PoolingConfig pooling;
  SidLossConfig sid;
  double count_weight = 1.0;
  int val_count_batches = 4;
  MixBatchConfig mixing;
  SimConfig simulate;
  SynthCorpusConfig corpus;
  BackendConfig backend;
  int max_speakers = 4;
  int max_overlap = 2;
  double chunk = 10.0;
  int average_k = 3;
  ScheduleConfig schedule_sid;
  ScheduleConfig schedule_dia;
  ScheduleConfig schedule_finetune;
  InferenceConfig inference;
  double scoring_frame_shift = 0.01;

  RunConfig();
  nlohmann::json ToJson() const;
  static RunConfig FromJson(const nlohmann::json& j);

  SidModelConfig SidModel() const;
  DiarizationConfig Diarization() const;
};

// Applies "a.b.c=value" overrides to a JSON document. The value is parsed
// as JSON when possible and taken as a string otherwise. Throws ConfigError
// for a malformed override.
void ApplyOverride(nlohmann::json* doc, const std::string& assignment);

// Reads the file (if non-empty), applies overrides, and validates. Errors
// name the config path.
RunConfig LoadRunConfig(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace sidpt

#endif  // SIDPT_CLI_RUN_CONFIG_H_
