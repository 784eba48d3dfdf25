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

#include "sidpt/diarization/model.h"

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/common/random.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

void BackendConfig::Validate() const {
  if (input_dim < 1 || hidden < 1 || num_classes < 2) throw ConfigError("backend: bad dimensions");
}

nlohmann::json BackendConfig::ToJson() const {
  return {{"input_dim", input_dim},
          {"hidden", hidden},
          {"bidirectional", bidirectional},
          {"num_classes", num_classes},
          {"seed", seed}};
}

BackendConfig BackendConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "backend";
  CheckKnownKeys(j, {"input_dim", "hidden", "bidirectional", "num_classes", "seed"}, sec);
  BackendConfig c;
  ReadKey(j, "input_dim", &c.input_dim, sec);
  ReadKey(j, "hidden", &c.hidden, sec);
  ReadKey(j, "bidirectional", &c.bidirectional, sec);
  ReadKey(j, "num_classes", &c.num_classes, sec);
  ReadKey(j, "seed", &c.seed, sec);
  c.Validate();
  return c;
}

namespace backend {

namespace {

std::string Name(const std::string& suffix) { return std::string(kPrefix) + suffix; }

void AddLstm(nn::ParameterSet* p, const std::string& dir, int in, int hid, Rng& rng) {
  p->Add(Name("lstm." + dir + ".w_ih"), nn::UniformFanIn(in, 4 * hid, hid, rng));
  p->Add(Name("lstm." + dir + ".w_hh"), nn::UniformFanIn(hid, 4 * hid, hid, rng));
  Matrix b = nn::UniformFanIn(1, 4 * hid, hid, rng);
  b.middleCols(hid, hid).array() += 1.0;  // forget gate starts open
  p->Add(Name("lstm." + dir + ".bias"), std::move(b));
}

nn::Var RunLstm(nn::Graph& g, const nn::ParameterSet& params, const std::string& dir, nn::Var e,
                bool reverse) {
  return nn::Lstm(e, g.Param(params, Name("lstm." + dir + ".w_ih")),
                  g.Param(params, Name("lstm." + dir + ".w_hh")),
                  g.Param(params, Name("lstm." + dir + ".bias")), reverse);
}

}  // namespace

nn::ParameterSet InitParams(const BackendConfig& cfg) {
  cfg.Validate();
  Rng rng(DeriveSeed(cfg.seed, 0xbac4e2d));
  nn::ParameterSet p;
  AddLstm(&p, "fwd", cfg.input_dim, cfg.hidden, rng);
  if (cfg.bidirectional) AddLstm(&p, "bwd", cfg.input_dim, cfg.hidden, rng);
  const int width = cfg.bidirectional ? 2 * cfg.hidden : cfg.hidden;
  p.Add(Name("output.weight"), nn::UniformFanIn(width, cfg.num_classes, width, rng));
  p.Add(Name("output.bias"), Matrix::Zero(1, cfg.num_classes));
  return p;
}

nn::Var Forward(nn::Graph& g, const nn::ParameterSet& params, const BackendConfig& cfg, nn::Var e) {
  if (e.cols() != cfg.input_dim) {
    throw ShapeError("backend expects " + std::to_string(cfg.input_dim) + "-dim embeddings, got " +
                     std::to_string(e.cols()));
  }
  nn::Var h = RunLstm(g, params, "fwd", e, false);
  if (cfg.bidirectional) h = nn::ConcatCols({h, RunLstm(g, params, "bwd", e, true)});
  return nn::AddRowBroadcast(nn::MatMul(h, g.Param(params, Name("output.weight"))),
                             g.Param(params, Name("output.bias")));
}

}  // namespace backend

PosteriorMatrix BackendForward(const FrameEmbeddingSequence& e, const nn::ParameterSet& params,
                               const BackendConfig& cfg) {
  nn::Graph g(false);
  PosteriorMatrix out;
  out.values = nn::SoftmaxRows(backend::Forward(g, params, cfg, g.Constant(e.values))).value();
  return out;
}

void DiarizationConfig::Validate() const {
  features.Validate();
  encoder.Validate();
  backend.Validate();
  if (encoder.input_dim != features.num_mels) throw ConfigError("encoder.input_dim != features.num_mels");
  if (backend.input_dim != encoder.emb_dim) throw ConfigError("backend.input_dim != encoder.emb_dim");
  if (backend.num_classes != Codec().num_classes()) {
    throw ConfigError("backend.num_classes must be " + std::to_string(Codec().num_classes()));
  }
}

nlohmann::json DiarizationConfig::ToJson() const {
  return {{"features", features.ToJson()},
          {"encoder", encoder.ToJson()},
          {"backend", backend.ToJson()},
          {"max_speakers", max_speakers},
          {"max_overlap", max_overlap}};
}

DiarizationConfig DiarizationConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "diarization";
  CheckKnownKeys(j, {"features", "encoder", "backend", "max_speakers", "max_overlap"}, sec);
  DiarizationConfig c;
  if (j.contains("features")) c.features = FeatureConfig::FromJson(j["features"]);
  if (j.contains("encoder")) c.encoder = EncoderConfig::FromJson(j["encoder"]);
  if (j.contains("backend")) c.backend = BackendConfig::FromJson(j["backend"]);
  ReadKey(j, "max_speakers", &c.max_speakers, sec);
  ReadKey(j, "max_overlap", &c.max_overlap, sec);
  c.Validate();
  return c;
}

DiarizationModel InitDiarizationModel(const DiarizationConfig& cfg) {
  cfg.Validate();
  DiarizationModel m;
  m.config = cfg;
  m.params = encoder::InitParams(cfg.encoder);
  m.params.Merge(backend::InitParams(cfg.backend));
  return m;
}

FeatureSequence ModelFeatures(const Waveform& wave, const FeatureConfig& cfg) {
  FeatureSequence f = LogMel(wave, cfg);
  MeanNormalize(&f.values);
  return f;
}

nn::Var DiarizationLogits(nn::Graph& g, const DiarizationModel& model, nn::Var features) {
  nn::Var e = encoder::Forward(g, model.params, model.config.encoder, features);
  return backend::Forward(g, model.params, model.config.backend, e);
}

PosteriorMatrix DiarizationPosteriors(const DiarizationModel& model, const Matrix& features) {
  nn::Graph g(false);
  PosteriorMatrix out;
  out.values = nn::SoftmaxRows(DiarizationLogits(g, model, g.Constant(features))).value();
  out.frame_shift = model.config.features.hop;
  return out;
}

void SaveDiarizationModel(const std::string& path, const DiarizationModel& model,
                          const nlohmann::json& meta) {
  nn::Checkpoint ckpt;
  ckpt.config = {{"kind", "diarization"}, {"model", model.config.ToJson()}};
  ckpt.meta = meta;
  ckpt.params = model.params;
  nn::SaveCheckpoint(path, ckpt);
}

DiarizationModel LoadDiarizationModel(const std::string& path) {
  nn::Checkpoint ckpt = nn::LoadCheckpoint(path);
  if (ckpt.config.value("kind", "") != "diarization" || !ckpt.config.contains("model")) {
    throw CheckpointError(path + ": not a diarization checkpoint");
  }
  DiarizationModel m;
  try {
    m.config = DiarizationConfig::FromJson(ckpt.config["model"]);
  } catch (const ConfigError& e) {
    throw CheckpointError(path + ": " + e.what());
  }
  const DiarizationModel fresh = InitDiarizationModel(m.config);
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

}  // namespace sidpt
