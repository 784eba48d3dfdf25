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

#include "sidpt/encoder/encoder.h"

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

void EncoderConfig::Validate() const {
  if (input_dim < 1) throw ConfigError("encoder.input_dim must be >= 1");
  if (channels < 1) throw ConfigError("encoder.channels must be > 0");
  if (emb_dim < 1) throw ConfigError("encoder.emb_dim must be > 0");
  if (num_blocks != static_cast<int>(dilations.size())) {
    throw ConfigError("encoder.num_blocks must equal len(encoder.dilations)");
  }
  if (kernel < 1 || kernel % 2 == 0) throw ConfigError("encoder.kernel must be odd and >= 1");
  for (int d : dilations) {
    if (d < 1) throw ConfigError("encoder.dilations must be >= 1");
  }
}

int EncoderConfig::ReceptiveField() const {
  int r = 1;
  for (int d : dilations) r += 2 * d * (kernel - 1) / 2;
  return r;
}

nlohmann::json EncoderConfig::ToJson() const {
  return {{"input_dim", input_dim}, {"channels", channels}, {"emb_dim", emb_dim},
          {"num_blocks", num_blocks}, {"dilations", dilations}, {"kernel", kernel},
          {"seed", seed}};
}

EncoderConfig EncoderConfig::FromJson(const nlohmann::json& j) {
  CheckKnownKeys(j, {"input_dim", "channels", "emb_dim", "num_blocks", "dilations", "kernel", "seed"}, "encoder");
  EncoderConfig c;
  ReadKey(j, "input_dim", &c.input_dim, "encoder");
  ReadKey(j, "channels", &c.channels, "encoder");
  ReadKey(j, "emb_dim", &c.emb_dim, "encoder");
  ReadKey(j, "num_blocks", &c.num_blocks, "encoder");
  ReadKey(j, "dilations", &c.dilations, "encoder");
  ReadKey(j, "kernel", &c.kernel, "encoder");
  ReadKey(j, "seed", &c.seed, "encoder");
  return c;
}

namespace encoder {

namespace {
std::string Block(int b) { return std::string(kPrefix) + "block" + std::to_string(b) + "."; }
}  // namespace

nn::ParameterSet InitParams(const EncoderConfig& cfg) {
  cfg.Validate();
  Rng rng(DeriveSeed(cfg.seed, 0xe1c0de));
  nn::ParameterSet p;
  const int c = cfg.channels;
  p.Add(std::string(kPrefix) + "input.weight", nn::UniformFanIn(cfg.input_dim, c, cfg.input_dim, rng));
  p.Add(std::string(kPrefix) + "input.bias", nn::UniformFanIn(1, c, cfg.input_dim, rng));
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const int fan_in = cfg.kernel * c;
    p.Add(Block(b) + "conv.weight", nn::UniformFanIn(fan_in, c, fan_in, rng));
    p.Add(Block(b) + "conv.bias", nn::UniformFanIn(1, c, fan_in, rng));
  }
  const int agg = cfg.num_blocks * c;
  p.Add(std::string(kPrefix) + "output.weight", nn::UniformFanIn(agg, cfg.emb_dim, agg, rng));
  p.Add(std::string(kPrefix) + "output.bias", nn::UniformFanIn(1, cfg.emb_dim, agg, rng));
  return p;
}

nn::Var Forward(nn::Graph& g, const nn::ParameterSet& params, const EncoderConfig& cfg, nn::Var x) {
  if (x.cols() != cfg.input_dim) {
    throw ShapeError("encoder expects " + std::to_string(cfg.input_dim) +
                     "-dim features, got " + std::to_string(x.cols()));
  }
  const std::string pre(kPrefix);
  nn::Var h = nn::Relu(nn::AddRowBroadcast(nn::MatMul(x, g.Param(params, pre + "input.weight")),
                                           g.Param(params, pre + "input.bias")));
  std::vector<nn::Var> outs;
  for (int b = 0; b < cfg.num_blocks; ++b) {
    nn::Var u = nn::Conv1d(h, g.Param(params, Block(b) + "conv.weight"),
                           g.Param(params, Block(b) + "conv.bias"), cfg.kernel, cfg.dilations[b]);
    h = nn::Add(h, nn::Relu(u));
    outs.push_back(h);
  }
  nn::Var agg = outs.size() == 1 ? outs[0] : nn::ConcatCols(outs);
  return nn::AddRowBroadcast(nn::MatMul(agg, g.Param(params, pre + "output.weight")),
                             g.Param(params, pre + "output.bias"));
}

FrameEmbeddingSequence Encode(const FeatureSequence& x, const nn::ParameterSet& params,
                              const EncoderConfig& cfg) {
  nn::Graph g(false);
  nn::Var out = Forward(g, params, cfg, g.Constant(x.values));
  return {out.value()};
}

}  // namespace encoder
}  // namespace sidpt
