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

#ifndef SIDPT_DATA_MANIFEST_H_
#define SIDPT_DATA_MANIFEST_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace sidpt {

enum class Subset { kTrain, kVal, kTest };
enum class TrialCondition { kSingleVsSingle, kSingleVsMulti, kMultiVsMulti };

std::string ToString(Subset s);
Subset SubsetFromString(const std::string& s);
std::string ToString(TrialCondition c);
TrialCondition ConditionFromString(const std::string& s);

// One row of a speaker-identification corpus manifest.
//   {"audio_path": str, "speaker_label": int, "duration": float,
//    "subset": "train"|"val"|"test"}
struct UtteranceRecord {
  std::string audio_path;
  int speaker_label = 0;
  double duration = 0.0;
  Subset subset = Subset::kTrain;
};

// {"enroll_path": str, "test_path": str, "target": bool,
//  "condition": "s_vs_s"|"s_vs_m"|"m_vs_m"}
struct TrialRecord {
  std::string enroll_path;
  std::string test_path;
  bool target = false;
  TrialCondition condition = TrialCondition::kSingleVsSingle;

  // Embeddings extracted per side: 1 for a single-speaker side, up to 2 for a
  // multi-speaker side.
  int MaxEnrollEmbeddings() const {
    return condition == TrialCondition::kMultiVsMulti ? 2 : 1;
  }
  int MaxTestEmbeddings() const {
    return condition == TrialCondition::kSingleVsSingle ? 1 : 2;
  }
};

// Row of a simulated-conversation manifest.
//   {"file_id": str, "wav": str, "rttm": str, "n_speakers": int}
struct MixtureEntry {
  std::string file_id;
  std::string wav_path;
  std::string rttm_path;
  int n_speakers = 0;
};

nlohmann::json ToJson(const UtteranceRecord& r);
nlohmann::json ToJson(const TrialRecord& r);
nlohmann::json ToJson(const MixtureEntry& r);
UtteranceRecord UtteranceFromJson(const nlohmann::json& j, int num_speakers = -1);
TrialRecord TrialFromJson(const nlohmann::json& j);
MixtureEntry MixtureFromJson(const nlohmann::json& j);

// JSON-lines helpers. Blank lines are skipped; errors carry the line number.
std::vector<nlohmann::json> ReadJsonLines(const std::string& path);
void WriteJsonLines(const std::string& path, const std::vector<nlohmann::json>& rows);
void AppendJsonLine(const std::string& path, const nlohmann::json& row);

std::vector<UtteranceRecord> ReadUtteranceManifest(const std::string& path);
std::vector<MixtureEntry> ReadMixtureManifest(const std::string& path);

// Trials text format: "target|nontarget enroll_path test_path condition".
std::vector<TrialRecord> ParseTrials(const std::string& text);
std::vector<TrialRecord> ReadTrials(const std::string& path);
std::string EmitTrials(const std::vector<TrialRecord>& trials);

// Resolves `path` relative to the directory containing `anchor_file` unless
// it is already absolute.
std::string ResolveRelative(const std::string& anchor_file, const std::string& path);

}  // namespace sidpt

#endif  // SIDPT_DATA_MANIFEST_H_
