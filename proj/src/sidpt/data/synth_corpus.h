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

#ifndef SIDPT_DATA_SYNTH_CORPUS_H_
#define SIDPT_DATA_SYNTH_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/data/manifest.h"

namespace sidpt {

struct SynthCorpusConfig {
  int first_speaker = 0;
  int num_speakers = 20;
  int train_per_speaker = 8;
  int val_per_speaker = 2;
  int test_per_speaker = 2;
  double min_duration = 3.0;  // seconds
  double max_duration = 6.0;
  int num_noises = 6;
  double noise_duration = 10.0;
  int trials_per_condition = 100;
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SynthCorpusConfig FromJson(const nlohmann::json& j);
};

struct SynthCorpus {
  std::vector<UtteranceRecord> utterances;  // paths relative to the corpus root
  std::vector<std::string> noise_paths;
  std::vector<TrialRecord> trials;
};

// Writes wav/, noise/, multi/, utterances.jsonl, noises.jsonl and trials.txt
// under out_dir. Multi-speaker trial sides are 0 dB mixtures of two test
// utterances from different speakers. Fully determined by cfg.
SynthCorpus GenerateSynthCorpus(const SynthCorpusConfig& cfg, const std::string& out_dir);

// Audio paths of a noises.jsonl file, resolved against its directory.
std::vector<std::string> ReadNoiseManifest(const std::string& path);

}  // namespace sidpt

#endif  // SIDPT_DATA_SYNTH_CORPUS_H_
