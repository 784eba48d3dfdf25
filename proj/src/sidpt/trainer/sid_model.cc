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

#include "sidpt/trainer/sid_model.h"

#include <algorithm>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/diarization/model.h"
#include "sidpt/nn/checkpoint.h"

namespace sidpt {

void SidModelConfig::Validate() const {
  features.Validate();
  encoder.Validate();
  pooling.Validate();
  if (encoder.input_dim != features.num_mels) throw ConfigError("encoder.input_dim != features.num_mels");
  if (pooling.input_dim != encoder.emb_dim) throw ConfigError("pooling.input_dim != encoder.emb_dim");
  if (sid.embedding_dim != pooling.embedding_dim) {
    throw ConfigError("sid.embedding_dim != pooling.embedding_dim");
  }
  if (count_weight < 0) throw ConfigError("count_weight must be >= 0");
}

nlohmann::json SidModelConfig::ToJson() const {
  return {{"features", features.ToJson()},
          {"encoder", encoder.ToJson()},
          {"pooling", pooling.ToJson()},
          {"sid", sid.ToJson()},
          {"count_weight", count_weight}};
}

SidModelConfig SidModelConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "sid_model";
  CheckKnownKeys(j, {"features", "encoder", "pooling", "sid", "count_weight"}, sec);
  SidModelConfig c;
  if (j.contains("features")) c.features = FeatureConfig::FromJson(j["features"]);
  if (j.contains("encoder")) c.encoder = EncoderConfig::FromJson(j["encoder"]);
  if (j.contains("pooling")) c.pooling = PoolingConfig::FromJson(j["pooling"]);
  if (j.contains("sid")) c.sid = SidLossConfig::FromJson(j["sid"]);
  ReadKey(j, "count_weight", &c.count_weight, sec);
  return c;
}

SidModel InitSidModel(SidModelConfig cfg, std::vector<int> class_speakers) {
  cfg.sid.num_classes = static_cast<int>(class_speakers.size());
  cfg.Validate();
  SidModel m;
  m.config = cfg;
  m.class_speakers = std::move(class_speakers);
  m.params = encoder::InitParams(cfg.encoder);
  m.params.Merge(pooling::InitParams(cfg.pooling));
  m.params.Merge(sid_loss::InitParams(cfg.sid));
  return m;
}

void SaveSidModel(const std::string& path, const SidModel& model, const nlohmann::json& meta) {
  nn::Checkpoint ckpt;
  ckpt.config = {{"kind", "sid"}, {"model", model.config.ToJson()}, {"class_speakers", model.class_speakers}};
  ckpt.meta = meta;
  ckpt.params = model.params;
  nn::SaveCheckpoint(path, ckpt);
}

SidModel LoadSidModel(const std::string& path) {
  nn::Checkpoint ckpt = nn::LoadCheckpoint(path);
  if (ckpt.config.value("kind", "") != "sid" || !ckpt.config.contains("model") ||
      !ckpt.config.contains("class_speakers")) {
    throw CheckpointError(path + ": not an identification checkpoint");
  }
  SidModel m;
  try {
    m.config = SidModelConfig::FromJson(ckpt.config["model"]);
    m.class_speakers = ckpt.config["class_speakers"].get<std::vector<int>>();
    m.config.sid.num_classes = static_cast<int>(m.class_speakers.size());
    m.config.Validate();
  } catch (const Error& e) {
    throw CheckpointError(path + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path + ": " + e.what());
  }
  const SidModel fresh = InitSidModel(m.config, m.class_speakers);
  for (const auto& [name, value] : fresh.params.entries()) {
    if (!ckpt.params.Has(name)) throw CheckpointError(path + ": missing tensor " + name);
    const Matrix& v = ckpt.params.Get(name);
    if (v.rows() != value.rows() || v.cols() != value.cols()) {
      throw CheckpointError(path + ": tensor " + name + " has the wrong shape");
    }
    m.params.Add(name, v);
  }
  return m;
}

std::vector<PooledEmbedding> PoolRecording(const SidModel& model, const Waveform& wave) {
  const FeatureSequence f = ModelFeatures(wave, model.config.features);
  const FrameEmbeddingSequence e = encoder::Encode(f, model.params, model.config.encoder);
  return pooling::RecursivePool(e, model.params, model.config.pooling);
}

std::vector<RowVector> SpeakerEmbeddings(const SidModel& model, const Waveform& wave, int max_embeddings) {
  const auto steps = PoolRecording(model, wave);
  const int count = pooling::CountSpeakers(steps, model.config.pooling.tau);
  const int n = std::min({std::max(count, 1), max_embeddings, static_cast<int>(steps.size())});
  std::vector<RowVector> out;
  for (int i = 0; i < n; ++i) out.push_back(steps[i].embedding);
  return out;
}

int IdentifySpeaker(const SidModel& model, const Waveform& wave) {
  const auto steps = PoolRecording(model, wave);
  const Matrix cos = sid_loss::Cosines(steps.front().embedding, model.params);
  Eigen::Index best = 0;
  cos.row(0).maxCoeff(&best);
  return model.class_speakers[static_cast<size_t>(best)];
}

}  // namespace sidpt
