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

#include "sidpt/mixing/mixing.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"

namespace sidpt {

namespace {

constexpr double kPeakTarget = 0.95;

void PeakNormalize(std::vector<float>* samples) {
  const double peak = PeakAbs(*samples);
  if (peak <= 1.0) return;
  const double g = kPeakTarget / peak;
  for (float& s : *samples) s = static_cast<float>(s * g);
}

}  // namespace

void MixBatchConfig::Validate() const {
  if (n_single < 0 || n_double < 0 || n_zero_max < 0) throw ConfigError("mixing: negative count");
  if (2 * n_double > n_single) throw ConfigError("mixing: n_double exceeds n_single/2");
  if (!(crop > 0)) throw ConfigError("mixing: crop must be positive");
  if (!(augment_prob >= 0 && augment_prob <= 1)) throw ConfigError("mixing: augment_prob outside [0,1]");
  if (snr_low_db > snr_high_db || pair_gain_low_db > pair_gain_high_db) {
    throw ConfigError("mixing: empty range");
  }
}

nlohmann::json MixBatchConfig::ToJson() const {
  return {{"n_single", n_single},
          {"n_double", n_double},
          {"n_zero_max", n_zero_max},
          {"crop", crop},
          {"augment_prob", augment_prob},
          {"snr_range_db", {snr_low_db, snr_high_db}},
          {"pair_gain_range_db", {pair_gain_low_db, pair_gain_high_db}}};
}

MixBatchConfig MixBatchConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "mixing";
  CheckKnownKeys(j, {"n_single", "n_double", "n_zero_max", "crop", "augment_prob", "snr_range_db",
                     "pair_gain_range_db"},
                 sec);
  MixBatchConfig c;
  ReadKey(j, "n_single", &c.n_single, sec);
  ReadKey(j, "n_double", &c.n_double, sec);
  ReadKey(j, "n_zero_max", &c.n_zero_max, sec);
  ReadKey(j, "crop", &c.crop, sec);
  ReadKey(j, "augment_prob", &c.augment_prob, sec);
  std::vector<double> snr{c.snr_low_db, c.snr_high_db}, gain{c.pair_gain_low_db, c.pair_gain_high_db};
  ReadKey(j, "snr_range_db", &snr, sec);
  ReadKey(j, "pair_gain_range_db", &gain, sec);
  if (snr.size() != 2 || gain.size() != 2) throw ConfigError("mixing: ranges need two values");
  c.snr_low_db = snr[0];
  c.snr_high_db = snr[1];
  c.pair_gain_low_db = gain[0];
  c.pair_gain_high_db = gain[1];
  c.Validate();
  return c;
}

Waveform MixTwo(const Waveform& x1, const Waveform& x2, double gain_db) {
  if (x1.size() != x2.size()) {
    throw ShapeError("mix_two: lengths differ (" + std::to_string(x1.size()) + " vs " +
                     std::to_string(x2.size()) + ")");
  }
  const double g = std::pow(10.0, gain_db / 20.0);
  Waveform out;
  out.source_id = x1.source_id + "+" + x2.source_id;
  out.samples.resize(x1.size());
  for (size_t i = 0; i < x1.size(); ++i) {
    out.samples[i] = static_cast<float>(static_cast<double>(x1.samples[i]) + g * x2.samples[i]);
  }
  PeakNormalize(&out.samples);
  return out;
}

double NoiseGainForSnr(double signal_rms, double noise_rms, double snr_db) {
  return signal_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
}

Waveform AugmentNoise(const Waveform& x, const Waveform& noise, double snr_db) {
  if (x.size() != noise.size()) throw ShapeError("augment_noise: lengths differ");
  if (std::isinf(snr_db) && snr_db > 0) return x;
  const double xr = Rms(x.samples);
  if (!(xr > 0)) throw DegenerateInputError("augment_noise: signal is digitally silent");
  const double nr = Rms(noise.samples);
  if (!(nr > 0)) return x;
  const double g = NoiseGainForSnr(xr, nr, snr_db);
  Waveform out = x;
  for (size_t i = 0; i < out.size(); ++i) {
    out.samples[i] = static_cast<float>(static_cast<double>(x.samples[i]) + g * noise.samples[i]);
  }
  return out;
}

std::vector<std::pair<int, int>> DistinctSpeakerPairs(const std::vector<int>& speakers, int k,
                                                      Rng& rng) {
  if (k == 0) return {};
  std::vector<int> order(speakers.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  // Take up to k items per speaker until 2k are chosen. This succeeds exactly
  // when k disjoint distinct-speaker pairs exist.
  std::map<int, int> taken;
  std::vector<int> chosen;
  for (int i : order) {
    if (static_cast<int>(chosen.size()) == 2 * k) break;
    int& n = taken[speakers[i]];
    if (n < k) {
      ++n;
      chosen.push_back(i);
    }
  }
  if (static_cast<int>(chosen.size()) < 2 * k) return {};
  // Group by speaker (largest group first, then first appearance) and pair
  // position i with i + k; no group spans k positions.
  std::map<int, int> first_seen;
  for (size_t p = 0; p < chosen.size(); ++p) first_seen.emplace(speakers[chosen[p]], static_cast<int>(p));
  std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
    const int sa = speakers[a], sb = speakers[b];
    if (taken[sa] != taken[sb]) return taken[sa] > taken[sb];
    return first_seen[sa] < first_seen[sb];
  });
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) pairs.emplace_back(chosen[i], chosen[i + k]);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

SidBatch BuildSidMinibatch(const std::vector<LabeledWave>& singles,
                           const std::vector<Waveform>& noises, const MixBatchConfig& cfg,
                           Rng& rng) {
  cfg.Validate();
  if (static_cast<int>(singles.size()) < cfg.n_single) {
    throw BatchCompositionError("need " + std::to_string(cfg.n_single) + " single utterances, got " +
                                std::to_string(singles.size()));
  }
  const bool may_augment = cfg.augment_prob > 0;
  if (may_augment && noises.empty()) throw BatchCompositionError("noise pool is empty");

  std::vector<Waveform> crops;
  std::vector<int> speakers;
  for (int i = 0; i < cfg.n_single; ++i) {
    crops.push_back(CropRandom(singles[i].wave, cfg.crop, rng));
    speakers.push_back(singles[i].speaker);
  }
  const auto pairs = DistinctSpeakerPairs(speakers, cfg.n_double, rng);
  if (static_cast<int>(pairs.size()) < cfg.n_double) {
    throw BatchCompositionError("cannot form " + std::to_string(cfg.n_double) +
                                " two-speaker mixtures from distinct in-batch speakers");
  }

  std::vector<Waveform> used_noise;
  auto maybe_augment = [&](const Waveform& x) {
    if (!may_augment || Uniform(rng, 0.0, 1.0) >= cfg.augment_prob) return x;
    if (!(Rms(x.samples) > 0)) return x;
    const Waveform& src = noises[static_cast<size_t>(UniformInt(rng, 0, static_cast<int>(noises.size()) - 1))];
    Waveform n = CropRandom(src, cfg.crop, rng);
    const double snr = Uniform(rng, cfg.snr_low_db, cfg.snr_high_db);
    Waveform out = AugmentNoise(x, n, snr);
    if (Rms(n.samples) > 0) used_noise.push_back(std::move(n));
    return out;
  };

  SidBatch batch;
  for (int i = 0; i < cfg.n_single; ++i) {
    batch.audio.push_back(maybe_augment(crops[i]));
    batch.label_sets.push_back({speakers[i]});
  }
  for (const auto& [a, b] : pairs) {
    const double gain = Uniform(rng, cfg.pair_gain_low_db, cfg.pair_gain_high_db);
    batch.audio.push_back(maybe_augment(MixTwo(crops[a], crops[b], gain)));
    batch.label_sets.push_back({speakers[a], speakers[b]});
  }
  const int n_zero = std::min<int>(cfg.n_zero_max, static_cast<int>(used_noise.size()));
  std::shuffle(used_noise.begin(), used_noise.end(), rng);
  for (int i = 0; i < n_zero; ++i) {
    batch.audio.push_back(used_noise[i]);
    batch.label_sets.push_back({});
  }
  for (const auto& s : batch.label_sets) batch.count_targets.push_back(static_cast<int>(s.size()));
  return batch;
}

}  // namespace sidpt
