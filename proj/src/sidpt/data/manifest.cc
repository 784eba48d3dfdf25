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

#include "sidpt/data/manifest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sidpt/common/error.h"

namespace sidpt {

using nlohmann::json;

std::string ToString(Subset s) {
  switch (s) {
    case Subset::kTrain: return "train";
    case Subset::kVal: return "val";
    case Subset::kTest: return "test";
  }
  return "train";
}

Subset SubsetFromString(const std::string& s) {
  if (s == "train") return Subset::kTrain;
  if (s == "val") return Subset::kVal;
  if (s == "test") return Subset::kTest;
  throw FormatError("unknown subset '" + s + "'");
}

std::string ToString(TrialCondition c) {
  switch (c) {
    case TrialCondition::kSingleVsSingle: return "s_vs_s";
    case TrialCondition::kSingleVsMulti: return "s_vs_m";
    case TrialCondition::kMultiVsMulti: return "m_vs_m";
  }
  return "s_vs_s";
}

TrialCondition ConditionFromString(const std::string& s) {
  if (s == "s_vs_s") return TrialCondition::kSingleVsSingle;
  if (s == "s_vs_m") return TrialCondition::kSingleVsMulti;
  if (s == "m_vs_m") return TrialCondition::kMultiVsMulti;
  throw FormatError("unknown trial condition '" + s + "'");
}

json ToJson(const UtteranceRecord& r) {
  return json{{"audio_path", r.audio_path},
              {"speaker_label", r.speaker_label},
              {"duration", r.duration},
              {"subset", ToString(r.subset)}};
}

json ToJson(const TrialRecord& r) {
  return json{{"enroll_path", r.enroll_path},
              {"test_path", r.test_path},
              {"target", r.target},
              {"condition", ToString(r.condition)}};
}

json ToJson(const MixtureEntry& r) {
  return json{{"file_id", r.file_id},
              {"wav", r.wav_path},
              {"rttm", r.rttm_path},
              {"n_speakers", r.n_speakers}};
}

UtteranceRecord UtteranceFromJson(const json& j, int num_speakers) {
  UtteranceRecord r;
  try {
    r.audio_path = j.at("audio_path").get<std::string>();
    r.speaker_label = j.at("speaker_label").get<int>();
    r.duration = j.at("duration").get<double>();
    r.subset = SubsetFromString(j.value("subset", std::string("train")));
  } catch (const json::exception& e) {
    throw FormatError(std::string("utterance record: ") + e.what());
  }
  if (r.speaker_label < 0 || (num_speakers >= 0 && r.speaker_label >= num_speakers)) {
    throw LabelError("speaker_label " + std::to_string(r.speaker_label) + " out of range");
  }
  if (!(r.duration > 0)) throw FormatError("utterance duration must be positive");
  return r;
}

TrialRecord TrialFromJson(const json& j) {
  TrialRecord r;
  try {
    r.enroll_path = j.at("enroll_path").get<std::string>();
    r.test_path = j.at("test_path").get<std::string>();
    r.target = j.at("target").get<bool>();
    r.condition = ConditionFromString(j.at("condition").get<std::string>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("trial record: ") + e.what());
  }
  return r;
}

MixtureEntry MixtureFromJson(const json& j) {
  MixtureEntry r;
  try {
    r.file_id = j.at("file_id").get<std::string>();
    r.wav_path = j.at("wav").get<std::string>();
    r.rttm_path = j.at("rttm").get<std::string>();
    r.n_speakers = j.value("n_speakers", 0);
  } catch (const json::exception& e) {
    throw FormatError(std::string("mixture record: ") + e.what());
  }
  return r;
}

std::vector<json> ReadJsonLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<json> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(line_no, path + ": " + e.what());
    }
  }
  return rows;
}

void WriteJsonLines(const std::string& path, const std::vector<json>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : rows) out << r.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

void AppendJsonLine(const std::string& path, const json& row) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot write " + path);
  out << row.dump() << '\n';
}

std::vector<UtteranceRecord> ReadUtteranceManifest(const std::string& path) {
  std::vector<UtteranceRecord> out;
  for (const auto& j : ReadJsonLines(path)) {
    auto r = UtteranceFromJson(j);
    r.audio_path = ResolveRelative(path, r.audio_path);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MixtureEntry> ReadMixtureManifest(const std::string& path) {
  std::vector<MixtureEntry> out;
  for (const auto& j : ReadJsonLines(path)) {
    auto r = MixtureFromJson(j);
    r.wav_path = ResolveRelative(path, r.wav_path);
    r.rttm_path = ResolveRelative(path, r.rttm_path);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> ParseTrials(const std::string& text) {
  std::vector<TrialRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string label, enroll, test, cond;
    if (!(ls >> label)) continue;
    if (!(ls >> enroll >> test >> cond)) {
      throw ParseError(line_no, "trial line needs 4 fields");
    }
    TrialRecord t;
    if (label == "target") {
      t.target = true;
    } else if (label == "nontarget") {
      t.target = false;
    } else {
      throw ParseError(line_no, "label must be target or nontarget, got '" + label + "'");
    }
    t.enroll_path = enroll;
    t.test_path = test;
    try {
      t.condition = ConditionFromString(cond);
    } catch (const FormatError& e) {
      throw ParseError(line_no, e.what());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TrialRecord> ReadTrials(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto trials = ParseTrials(ss.str());
  for (auto& t : trials) {
    t.enroll_path = ResolveRelative(path, t.enroll_path);
    t.test_path = ResolveRelative(path, t.test_path);
  }
  return trials;
}

std::string EmitTrials(const std::vector<TrialRecord>& trials) {
  std::string out;
  for (const auto& t : trials) {
    out += t.target ? "target " : "nontarget ";
    out += t.enroll_path + " " + t.test_path + " " + ToString(t.condition) + "\n";
  }
  return out;
}

std::string ResolveRelative(const std::string& anchor_file, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  auto base = std::filesystem::path(anchor_file).parent_path();
  return (base / p).lexically_normal().string();
}

}  // namespace sidpt
