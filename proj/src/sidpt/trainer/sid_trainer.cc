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

#include "sidpt/trainer/sid_trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>

#include "sidpt/common/error.h"
#include "sidpt/data/manifest.h"
#include "sidpt/diarization/model.h"
#include "sidpt/nn/adam.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

namespace {

std::string EpochPath(const std::string& dir, int epoch) {
  char name[64];
  std::snprintf(name, sizeof(name), "sid_epoch%03d.ckpt", epoch);
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

nn::Var SidBatchLoss(nn::Graph& g, const SidModel& model, const SidBatch& batch,
                     const std::vector<int>& class_of_speaker_index, double* sid_part,
                     double* count_part) {
  const SidModelConfig& cfg = model.config;
  std::vector<sid_loss::Sample> samples;
  std::vector<nn::Var> counting;
  for (size_t i = 0; i < batch.size(); ++i) {
    const FeatureSequence f = ModelFeatures(batch.audio[i], cfg.features);
    nn::Var e = encoder::Forward(g, model.params, cfg.encoder, g.Constant(f.values));
    const auto steps = pooling::RecursivePoolGraph(g, model.params, cfg.pooling, e);
    sid_loss::Sample s;
    std::vector<nn::Var> logits;
    for (const auto& st : steps) {
      s.embeddings.push_back(st.embedding);
      logits.push_back(st.existence_logit);
    }
    for (int spk : batch.label_sets[i]) s.labels.push_back(class_of_speaker_index.at(static_cast<size_t>(spk)));
    samples.push_back(std::move(s));
    counting.push_back(CountingLossGraph(logits, batch.count_targets[i]));
  }
  nn::Var sid = sid_loss::LossGraph(g, model.params, cfg.sid, samples);
  nn::Var count = nn::Scale(nn::SumAll(nn::ConcatRows(counting)), 1.0 / static_cast<double>(counting.size()));
  if (sid_part) *sid_part = sid.scalar();
  if (count_part) *count_part = count.scalar();
  return nn::Add(sid, nn::Scale(count, cfg.count_weight));
}

SidEvaluation EvaluateSid(const SidModel& model, const std::vector<LabeledWave>& val,
                          const std::vector<Waveform>& noises, const MixBatchConfig& mixing,
                          int count_batches, uint64_t seed) {
  SidEvaluation ev;
  if (!val.empty()) {
    int correct = 0;
    for (const auto& u : val) correct += IdentifySpeaker(model, u.wave) == u.speaker;
    ev.id_accuracy = static_cast<double>(correct) / static_cast<double>(val.size());
  }
  MixBatchConfig mc = mixing;
  if (mc.augment_prob == 0) mc.augment_prob = 0.5;
  mc.n_single = std::min<int>(mc.n_single, static_cast<int>(val.size()));
  mc.n_double = std::min(mc.n_double, mc.n_single / 2);
  int total = 0, correct = 0;
  for (int b = 0; b < count_batches && mc.n_single > 0; ++b) {
    Rng rng(DeriveSeed(seed, 0x7a10000 + static_cast<uint64_t>(b)));
    std::vector<LabeledWave> pick = val;
    std::shuffle(pick.begin(), pick.end(), rng);
    SidBatch batch;
    try {
      batch = BuildSidMinibatch(pick, noises, mc, rng);
    } catch (const BatchCompositionError&) {
      continue;
    }
    for (size_t i = 0; i < batch.size(); ++i) {
      const FeatureSequence f = ModelFeatures(batch.audio[i], model.config.features);
      const auto steps = pooling::RecursivePool(encoder::Encode(f, model.params, model.config.encoder),
                                                model.params, model.config.pooling);
      correct += pooling::CountSpeakers(steps, model.config.pooling.tau) == batch.count_targets[i];
      ++total;
    }
  }
  ev.count_accuracy = total > 0 ? static_cast<double>(correct) / total : 0.0;
  return ev;
}

SidPretrainResult PretrainSid(const SidPretrainConfig& cfg, const SidTrainData& data) {
  cfg.schedule.Validate();
  cfg.mixing.Validate();
  std::set<int> speakers;
  for (const auto& u : data.train) speakers.insert(u.speaker);
  if (speakers.size() < 2) throw TrainingError("identification pretraining needs >= 2 speakers");
  if (static_cast<int>(data.train.size()) < cfg.mixing.n_single) {
    throw TrainingError("training pool smaller than n_single");
  }
  const std::vector<int> class_speakers(speakers.begin(), speakers.end());
  std::vector<int> class_of(static_cast<size_t>(*speakers.rbegin()) + 1, -1);
  for (size_t c = 0; c < class_speakers.size(); ++c) class_of[class_speakers[c]] = static_cast<int>(c);

  SidModelConfig mcfg = cfg.model;
  // Initialisation follows the run seed; the stored config records the result.
  mcfg.encoder.seed = DeriveSeed(cfg.schedule.seed, mcfg.encoder.seed);
  mcfg.pooling.seed = DeriveSeed(cfg.schedule.seed, mcfg.pooling.seed + 1);
  mcfg.sid.seed = DeriveSeed(cfg.schedule.seed, mcfg.sid.seed + 2);
  SidPretrainResult result;
  result.model = InitSidModel(mcfg, class_speakers);
  SidModel& model = result.model;
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);
  const std::string log_path =
      cfg.out_dir.empty() ? "" : (std::filesystem::path(cfg.out_dir) / "metrics.jsonl").string();
  if (!log_path.empty()) std::filesystem::remove(log_path);

  nn::Adam adam(cfg.schedule.adam);
  long step = 0;
  std::vector<size_t> pool(data.train.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (int epoch = 0; epoch < cfg.schedule.epochs; ++epoch) {
    double loss_sum = 0.0;
    double lr = 0.0;
    for (int s = 0; s < cfg.schedule.steps_per_epoch; ++s) {
      ++step;
      const uint64_t batch_seed = DeriveSeed(cfg.schedule.seed, static_cast<uint64_t>(step));
      Rng rng(batch_seed);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<LabeledWave> singles;
      for (int i = 0; i < cfg.mixing.n_single; ++i) singles.push_back(data.train[pool[i]]);
      const SidBatch batch = BuildSidMinibatch(singles, data.noises, cfg.mixing, rng);

      nn::Graph g;
      nn::Var loss = SidBatchLoss(g, model, batch, class_of);
      if (!std::isfinite(loss.scalar())) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + " step " +
                            std::to_string(step) + " (batch seed " + std::to_string(batch_seed) + ")");
      }
      g.Backward(loss);
      nn::ParameterSet grads = g.ParamGrads();
      ClipGradNorm(&grads, cfg.schedule.grad_clip);
      lr = LrSchedule(step, epoch, cfg.schedule);
      adam.Step(&model.params, grads, lr);
      loss_sum += loss.scalar();
    }
    const SidEvaluation ev =
        EvaluateSid(model, data.val, data.noises, cfg.mixing, cfg.val_count_batches, cfg.schedule.seed);
    result.final_eval = ev;
    nlohmann::json row = {{"epoch", epoch},
                          {"step", step},
                          {"loss", loss_sum / cfg.schedule.steps_per_epoch},
                          {"val_metric", ev.id_accuracy},
                          {"lr", lr},
                          {"count_acc", ev.count_accuracy}};
    result.log.push_back(row);
    if (!cfg.out_dir.empty()) {
      const std::string path = EpochPath(cfg.out_dir, epoch);
      SaveSidModel(path, model, row);
      result.checkpoints.push_back({epoch, ev.id_accuracy, path});
      AppendJsonLine(log_path, row);
    }
  }
  return result;
}

}  // namespace sidpt
