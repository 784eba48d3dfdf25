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

#include "sidpt/losses/sid_loss.h"

#include <cmath>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/common/random.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

void SidLossConfig::Validate() const {
  if (num_classes < 1) throw ConfigError("sid_loss.num_classes must be >= 1");
  if (embedding_dim < 1) throw ConfigError("sid_loss.embedding_dim must be >= 1");
  if (margin < 0) throw ConfigError("sid_loss.margin must be >= 0");
  if (!(scale > 0)) throw ConfigError("sid_loss.scale must be > 0");
}

nlohmann::json SidLossConfig::ToJson() const {
  return {{"num_classes", num_classes}, {"embedding_dim", embedding_dim},
          {"margin", margin}, {"scale", scale}, {"seed", seed}};
}

SidLossConfig SidLossConfig::FromJson(const nlohmann::json& j) {
  CheckKnownKeys(j, {"num_classes", "embedding_dim", "margin", "scale", "seed"}, "sid");
  SidLossConfig c;
  ReadKey(j, "num_classes", &c.num_classes, "sid");
  ReadKey(j, "embedding_dim", &c.embedding_dim, "sid");
  ReadKey(j, "margin", &c.margin, "sid");
  ReadKey(j, "scale", &c.scale, "sid");
  ReadKey(j, "seed", &c.seed, "sid");
  return c;
}

namespace sid_loss {

nn::ParameterSet InitParams(const SidLossConfig& cfg) {
  cfg.Validate();
  Rng rng(DeriveSeed(cfg.seed, 0x51d));
  nn::ParameterSet p;
  p.Add(kWeightName, nn::UniformFanIn(cfg.embedding_dim, cfg.num_classes, cfg.embedding_dim, rng));
  NormalizeColumns(&p);
  return p;
}

void NormalizeColumns(nn::ParameterSet* params) {
  Matrix& w = params->Get(kWeightName);
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    const double n = w.col(c).norm();
    if (n > 0) w.col(c) /= n;
  }
}

namespace {

// -log softmax(AAM logits)[label] for one 1 x C cosine row.
nn::Var Term(nn::Var cos_row, int label, const SidLossConfig& cfg) {
  nn::Var logits = nn::AamLogits(cos_row, label, cfg.margin, cfg.scale);
  return nn::Scale(nn::PickPerRow(nn::LogSoftmaxRows(logits), {label}), -1.0);
}

}  // namespace

nn::Var LossGraph(nn::Graph& g, const nn::ParameterSet& params, const SidLossConfig& cfg,
                  const std::vector<Sample>& samples, int* contributions,
                  std::vector<bool>* chosen_identity) {
  nn::Var w = g.Param(params, kWeightName);
  if (w.rows() != cfg.embedding_dim) throw ShapeError("sid.weight rows != embedding_dim");
  const int num_classes = static_cast<int>(w.cols());
  nn::Var classes_t = nn::Transpose(nn::NormalizeRows(nn::Transpose(w)));  // E x C

  std::vector<nn::Var> terms;
  auto cosine = [&](nn::Var v) { return nn::MatMul(nn::NormalizeRows(v), classes_t); };
  for (const auto& s : samples) {
    for (int l : s.labels) {
      if (l < 0 || l >= num_classes) {
        throw LabelError("speaker label " + std::to_string(l) + " outside class table of " +
                         std::to_string(num_classes));
      }
    }
    if (s.labels.empty()) continue;
    if (s.labels.size() > 2) throw LabelError("at most two labels per sample");
    if (s.embeddings.size() < s.labels.size()) throw ShapeError("fewer embeddings than labels");
    if (s.labels.size() == 1) {
      terms.push_back(Term(cosine(s.embeddings[0]), s.labels[0], cfg));
      continue;
    }
    nn::Var c0 = cosine(s.embeddings[0]);
    nn::Var c1 = cosine(s.embeddings[1]);
    nn::Var a = nn::Add(Term(c0, s.labels[0], cfg), Term(c1, s.labels[1], cfg));
    nn::Var b = nn::Add(Term(c0, s.labels[1], cfg), Term(c1, s.labels[0], cfg));
    const bool identity = a.scalar() <= b.scalar();
    if (chosen_identity) chosen_identity->push_back(identity);
    nn::Var pick = identity ? a : b;
    // Keep one term per contribution: split the pair sum evenly.
    terms.push_back(nn::Scale(pick, 0.5));
    terms.push_back(nn::Scale(pick, 0.5));
  }
  if (contributions) *contributions = static_cast<int>(terms.size());
  if (terms.empty()) return g.Constant(Matrix::Zero(1, 1));
  return nn::Scale(nn::SumAll(nn::ConcatRows(terms)), 1.0 / static_cast<double>(terms.size()));
}

double Loss(const std::vector<std::vector<RowVector>>& embeddings,
            const std::vector<std::vector<int>>& labels, const nn::ParameterSet& params,
            const SidLossConfig& cfg) {
  if (embeddings.size() != labels.size()) throw ShapeError("embeddings/labels size mismatch");
  nn::Graph g(false);
  std::vector<Sample> samples;
  for (size_t i = 0; i < embeddings.size(); ++i) {
    Sample s;
    for (const auto& v : embeddings[i]) s.embeddings.push_back(g.Constant(v));
    s.labels = labels[i];
    samples.push_back(std::move(s));
  }
  return LossGraph(g, params, cfg, samples).scalar();
}

Matrix Cosines(const Matrix& embeddings, const nn::ParameterSet& params) {
  Matrix w = params.Get(kWeightName);
  for (Eigen::Index c = 0; c < w.cols(); ++c) w.col(c) /= std::max(w.col(c).norm(), 1e-12);
  Matrix e = embeddings;
  for (Eigen::Index i = 0; i < e.rows(); ++i) e.row(i) /= std::max(e.row(i).norm(), 1e-12);
  return e * w;
}

}  // namespace sid_loss

double CountingLoss(const std::vector<double>& probs, int true_count) {
  if (probs.empty()) throw ShapeError("counting loss needs at least one step");
  if (true_count < 0 || true_count > static_cast<int>(probs.size())) {
    throw LabelError("true_count exceeds the number of recursion steps");
  }
  double total = 0.0;
  for (size_t s = 0; s < probs.size(); ++s) {
    const bool target = static_cast<int>(s) < true_count;
    total -= target ? std::log(probs[s]) : std::log1p(-probs[s]);
  }
  return total / static_cast<double>(probs.size());
}

nn::Var CountingLossGraph(const std::vector<nn::Var>& logits, int true_count) {
  if (logits.empty()) throw ShapeError("counting loss needs at least one step");
  if (true_count < 0 || true_count > static_cast<int>(logits.size())) {
    throw LabelError("true_count exceeds the number of recursion steps");
  }
  nn::Graph& g = *logits[0].graph();
  nn::Var z = nn::ConcatRows(logits);  // S x 1
  Matrix y(z.rows(), 1);
  for (Eigen::Index s = 0; s < y.rows(); ++s) y(s, 0) = s < true_count ? 1.0 : 0.0;
  // BCE with logits: softplus(z) - y z.
  nn::Var bce = nn::Sub(nn::Softplus(z), nn::Mul(g.Constant(y), z));
  return nn::MeanAll(bce);
}

}  // namespace sidpt
