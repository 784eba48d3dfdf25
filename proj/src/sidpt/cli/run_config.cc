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

#include "sidpt/cli/run_config.h"

#include <fstream>
#include <sstream>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"

namespace sidpt {

RunConfig::RunConfig() {
  schedule_finetune.peak_lr = 1e-4;
  sid.num_classes = 0;
}

nlohmann::json RunConfig::ToJson() const {
  return {{"version", version},
          {"seed", seed},
          {"output_dir", output_dir},
          {"features", features.ToJson()},
          {"encoder", encoder.ToJson()},
          {"pooling", pooling.ToJson()},
          {"sid", {{"margin", sid.margin},
                   {"scale", sid.scale},
                   {"count_weight", count_weight},
                   {"val_count_batches", val_count_batches}}},
          {"mixing", mixing.ToJson()},
          {"simulate", simulate.ToJson()},
          {"corpus", corpus.ToJson()},
          {"backend", {{"hidden", backend.hidden}, {"bidirectional", backend.bidirectional}}},
          {"diarization", {{"max_speakers", max_speakers},
                           {"max_overlap", max_overlap},
                           {"chunk", chunk},
                           {"average_k", average_k}}},
          {"schedule", {{"sid", schedule_sid.ToJson()},
                        {"dia", schedule_dia.ToJson()},
                        {"finetune", schedule_finetune.ToJson()}}},
          {"inference", inference.ToJson()},
          {"scoring", {{"frame_shift", scoring_frame_shift}}}};
}

RunConfig RunConfig::FromJson(const nlohmann::json& j) {
  CheckKnownKeys(j, {"version", "seed", "output_dir", "features", "encoder", "pooling", "sid", "mixing",
                     "simulate", "corpus", "backend", "diarization", "schedule", "inference", "scoring"},
                 "config");
  RunConfig c;
  ReadKey(j, "version", &c.version, "config");
  if (c.version != kRunConfigVersion) {
    throw ConfigError("config.version " + std::to_string(c.version) + " is not supported");
  }
  ReadKey(j, "seed", &c.seed, "config");
  ReadKey(j, "output_dir", &c.output_dir, "config");
  if (j.contains("features")) c.features = FeatureConfig::FromJson(j["features"]);
  if (j.contains("encoder")) c.encoder = EncoderConfig::FromJson(j["encoder"]);
  if (j.contains("pooling")) c.pooling = PoolingConfig::FromJson(j["pooling"]);
  if (j.contains("sid")) {
    const auto& s = j["sid"];
    CheckKnownKeys(s, {"margin", "scale", "count_weight", "val_count_batches"}, "sid");
    ReadKey(s, "margin", &c.sid.margin, "sid");
    ReadKey(s, "scale", &c.sid.scale, "sid");
    ReadKey(s, "count_weight", &c.count_weight, "sid");
    ReadKey(s, "val_count_batches", &c.val_count_batches, "sid");
  }
  if (j.contains("mixing")) c.mixing = MixBatchConfig::FromJson(j["mixing"]);
  if (j.contains("simulate")) c.simulate = SimConfig::FromJson(j["simulate"]);
  if (j.contains("corpus")) c.corpus = SynthCorpusConfig::FromJson(j["corpus"]);
  if (j.contains("backend")) {
    const auto& b = j["backend"];
    CheckKnownKeys(b, {"hidden", "bidirectional"}, "backend");
    ReadKey(b, "hidden", &c.backend.hidden, "backend");
    ReadKey(b, "bidirectional", &c.backend.bidirectional, "backend");
  }
  if (j.contains("diarization")) {
    const auto& d = j["diarization"];
    CheckKnownKeys(d, {"max_speakers", "max_overlap", "chunk", "average_k"}, "diarization");
    ReadKey(d, "max_speakers", &c.max_speakers, "diarization");
    ReadKey(d, "max_overlap", &c.max_overlap, "diarization");
    ReadKey(d, "chunk", &c.chunk, "diarization");
    ReadKey(d, "average_k", &c.average_k, "diarization");
    if (!(c.chunk > 0) || c.average_k < 1) throw ConfigError("diarization: chunk > 0 and average_k >= 1");
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    CheckKnownKeys(s, {"sid", "dia", "finetune"}, "schedule");
    // Each stage starts from its own defaults; finetuning defaults to 1e-4.
    if (s.contains("sid")) c.schedule_sid = ScheduleConfig::FromJson(s["sid"]);
    if (s.contains("dia")) c.schedule_dia = ScheduleConfig::FromJson(s["dia"]);
    if (s.contains("finetune")) {
      nlohmann::json f = s["finetune"];
      if (!f.contains("peak_lr") && f.is_object()) f["peak_lr"] = 1e-4;
      c.schedule_finetune = ScheduleConfig::FromJson(f);
    }
  }
  if (j.contains("inference")) c.inference = InferenceConfig::FromJson(j["inference"]);
  if (j.contains("scoring")) {
    CheckKnownKeys(j["scoring"], {"frame_shift"}, "scoring");
    ReadKey(j["scoring"], "frame_shift", &c.scoring_frame_shift, "scoring");
    if (!(c.scoring_frame_shift > 0)) throw ConfigError("scoring.frame_shift must be positive");
  }
  c.schedule_sid.seed ^= c.seed;
  c.schedule_dia.seed ^= c.seed;
  c.schedule_finetune.seed ^= c.seed;
  c.simulate.seed ^= c.seed;
  c.corpus.seed ^= c.seed;
  return c;
}

SidModelConfig RunConfig::SidModel() const {
  SidModelConfig m;
  m.features = features;
  m.encoder = encoder;
  m.encoder.input_dim = features.num_mels;
  m.pooling = pooling;
  m.pooling.input_dim = m.encoder.emb_dim;
  m.sid = sid;
  m.sid.embedding_dim = pooling.embedding_dim;
  m.count_weight = count_weight;
  return m;
}

DiarizationConfig RunConfig::Diarization() const {
  DiarizationConfig d;
  d.features = features;
  d.encoder = encoder;
  d.encoder.input_dim = features.num_mels;
  d.backend = backend;
  d.backend.input_dim = d.encoder.emb_dim;
  d.max_speakers = max_speakers;
  d.max_overlap = max_overlap;
  d.backend.num_classes = d.Codec().num_classes();
  d.Validate();
  return d;
}

void ApplyOverride(nlohmann::json* doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key.path=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = doc;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    parts.push_back(part);
  }
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError("override '" + key + "': '" + parts[i] + "' is not a section");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = nlohmann::json::object();
  }
  if (!node->is_object()) throw ConfigError("override '" + key + "': parent is not a section");
  (*node)[parts.back()] = value;
}

RunConfig LoadRunConfig(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  const std::string where = path.empty() ? "<defaults>" : path;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  try {
    for (const auto& o : overrides) ApplyOverride(&doc, o);
    RunConfig c = RunConfig::FromJson(doc);
    c.Diarization();
    c.SidModel().Validate();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace sidpt
