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

#include "sidpt/trainer/dia_trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "sidpt/common/error.h"
#include "sidpt/nn/adam.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

std::vector<DiaChunk> ChunkRecording(const Waveform& wave, const std::vector<RttmRecord>& records,
                                     double chunk_seconds, const FeatureConfig& features,
                                     const PowersetCodec& codec, const std::string& file_id) {
  const size_t chunk_len = SecondsToSamples(chunk_seconds);
  const size_t n_chunks = std::max<size_t>(1, wave.size() / chunk_len);
  std::vector<DiaChunk> out;
  for (size_t k = 0; k < n_chunks; ++k) {
    const size_t begin = k * chunk_len;
    const size_t len = n_chunks == 1 ? std::min(wave.size(), chunk_len) : chunk_len;
    Waveform piece(std::vector<float>(wave.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                      wave.samples.begin() + static_cast<std::ptrdiff_t>(begin + len)));
    DiaChunk c;
    c.file_id = file_id;
    c.index = static_cast<int>(k);
    c.features = ModelFeatures(piece, features).values;

    const double t0 = static_cast<double>(begin) / kSampleRate;
    const double t1 = static_cast<double>(begin + len) / kSampleRate;
    std::vector<RttmRecord> local;
    for (const auto& r : records) {
      const double on = std::max(r.onset, t0), off = std::min(r.onset + r.duration, t1);
      if (off > on) local.push_back({r.file_id, on - t0, off - on, r.speaker});
    }
    const int frames = static_cast<int>(c.features.rows());
    c.reference = RttmToActivity(local, features.hop, frames, SpeakersOf(local));
    c.target = ReduceForPowerset(c.reference, codec);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<DiaChunk> LoadChunks(const std::vector<MixtureEntry>& entries, double chunk_seconds,
                                 const FeatureConfig& features, const PowersetCodec& codec) {
  std::vector<DiaChunk> out;
  for (const auto& e : entries) {
    auto chunks = ChunkRecording(ReadWav(e.wav_path), ReadRttm(e.rttm_path), chunk_seconds, features,
                                 codec, e.file_id);
    for (auto& c : chunks) out.push_back(std::move(c));
  }
  return out;
}

DerBreakdown ChunkDer(const DiarizationModel& model, const std::vector<DiaChunk>& chunks) {
  const PowersetCodec codec = model.config.Codec();
  DerBreakdown total;
  for (const auto& c : chunks) {
    const PosteriorMatrix p = DiarizationPosteriors(model, c.features);
    const ActivityMatrix hyp = codec.DecodeSequence(codec.Argmax(p.values), c.reference.frame_shift());
    total += DerComponents(c.reference, hyp);
  }
  return total;
}

DiaTrainResult TrainDiarization(const DiaTrainConfig& cfg, DiarizationModel init,
                                const std::vector<DiaChunk>& train, const std::vector<DiaChunk>& val) {
  cfg.schedule.Validate();
  if (cfg.out_dir.empty()) throw TrainingError("diarization training needs an output directory");
  if (train.empty()) throw TrainingError("no training chunks");
  if (val.empty()) throw TrainingError("no validation chunks");
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const std::string log_path = (fs::path(cfg.out_dir) / "metrics.jsonl").string();
  fs::remove(log_path);

  DiaTrainResult result;
  DiarizationModel model = std::move(init);
  const PowersetCodec codec = model.config.Codec();
  nn::Adam adam(cfg.schedule.adam);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  long step = 0;
  const size_t batch = static_cast<size_t>(cfg.schedule.batch_size);

  for (int epoch = 0; epoch < cfg.schedule.epochs; ++epoch) {
    Rng rng(DeriveSeed(cfg.schedule.seed, 0xd1a0000 + static_cast<uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int loss_count = 0;
    double lr = 0.0;
    for (size_t b0 = 0; b0 < order.size(); b0 += batch) {
      ++step;
      const size_t b1 = std::min(order.size(), b0 + batch);
      const double inv = 1.0 / static_cast<double>(b1 - b0);
      nn::ParameterSet grads = model.params.ZerosLike();
      double batch_loss = 0.0;
      for (size_t i = b0; i < b1; ++i) {
        const DiaChunk& c = train[order[i]];
        nn::Graph g;
        nn::Var loss = PowersetLossGraph(DiarizationLogits(g, model, g.Constant(c.features)), c.target, codec);
        if (!std::isfinite(loss.scalar())) {
          throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + " step " +
                              std::to_string(step) + " (chunk " + c.file_id + "#" +
                              std::to_string(c.index) + ")");
        }
        g.Backward(loss);
        grads.AddScaled(g.ParamGrads(), inv);
        batch_loss += loss.scalar() * inv;
      }
      ClipGradNorm(&grads, cfg.schedule.grad_clip);
      lr = LrSchedule(step, epoch, cfg.schedule);
      adam.Step(&model.params, grads, lr);
      loss_sum += batch_loss;
      ++loss_count;
    }
    const DerBreakdown der = ChunkDer(model, val);
    nlohmann::json row = {{"epoch", epoch},          {"step", step}, {"loss", loss_sum / loss_count},
                          {"val_metric", der.der}, {"lr", lr},     {"tag", cfg.tag}};
    char name[64];
    std::snprintf(name, sizeof(name), "%s_epoch%03d.ckpt", cfg.tag.c_str(), epoch);
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    SaveDiarizationModel(path, model, row);
    result.checkpoints.push_back({epoch, der.der, path});
    result.log.push_back(row);
    AppendJsonLine(log_path, row);
  }
  const int k = std::min<int>(cfg.average_k, static_cast<int>(result.checkpoints.size()));
  result.model.config = model.config;
  result.model.params = AverageCheckpoints(result.checkpoints, k, MetricGoal::kMinimize);
  return result;
}

DiaTrainResult PretrainDia(const DiaTrainConfig& cfg, const std::vector<DiaChunk>& train,
                           const std::vector<DiaChunk>& val) {
  DiarizationConfig mc = cfg.model;
  mc.encoder.seed = DeriveSeed(cfg.schedule.seed, mc.encoder.seed);
  mc.backend.seed = DeriveSeed(cfg.schedule.seed, mc.backend.seed + 1);
  return TrainDiarization(cfg, InitDiarizationModel(mc), train, val);
}

DiarizationModel DiarizationFromSid(const SidModel& sid, const DiarizationConfig& cfg) {
  cfg.Validate();
  EncoderConfig a = sid.config.encoder, b = cfg.encoder;
  a.seed = b.seed = 0;
  if (!(a == b)) throw CheckpointError("pretrained encoder config differs from the diarization config");
  if (!(sid.config.features == cfg.features)) {
    throw CheckpointError("pretrained feature config differs from the diarization config");
  }
  DiarizationModel m;
  m.config = cfg;
  m.config.encoder = sid.config.encoder;
  m.params = sid.params;
  m.params.EraseWithPrefix(pooling::kPrefix);
  m.params.EraseWithPrefix("sid.");
  m.params.Merge(backend::InitParams(cfg.backend));
  return m;
}

DiaTrainResult Finetune(const DiaTrainConfig& cfg, const SidModel& pretrained,
                        const std::vector<DiaChunk>& train, const std::vector<DiaChunk>& val) {
  DiarizationConfig mc = cfg.model;
  mc.backend.seed = DeriveSeed(cfg.schedule.seed, mc.backend.seed + 1);
  return TrainDiarization(cfg, DiarizationFromSid(pretrained, mc), train, val);
}

}  // namespace sidpt
