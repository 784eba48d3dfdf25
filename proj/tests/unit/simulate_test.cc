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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "sidpt/common/error.h"
#include "sidpt/data/activity.h"
#include "sidpt/data/manifest.h"
#include "sidpt/data/synth.h"
#include "sidpt/diarization/inference.h"
#include "sidpt/simulate/simulate.h"
#include "test_util.h"

namespace sidpt {
namespace {

SpeakerPools MakePools(int first, int n, int per_speaker = 3) {
  SpeakerPools raw;
  for (int s = first; s < first + n; ++s) {
    for (int u = 0; u < per_speaker; ++u) {
      raw[s].push_back(SynthSpeakerUtterance(s, 2.0 + 0.5 * u, 1000 * s + u));
    }
  }
  return TrimPools(raw, VadConfig());
}

SimulatedMixture Simulate(const SpeakerPools& pools, const std::vector<int>& ids, SimConfig cfg,
                          uint64_t seed, bool noise = true) {
  std::vector<const std::vector<Waveform>*> sel;
  std::vector<std::string> names;
  for (int id : ids) {
    sel.push_back(&pools.at(id));
    names.push_back("s" + std::to_string(id));
  }
  std::vector<Waveform> noises;
  if (noise) noises.push_back(SynthNoise(0, 8.0, 5));
  cfg.add_noise = noise;
  Rng rng(seed);
  return SimulateConversation(sel, names, noises, cfg, rng, "f");
}

// Frame-level overlap ratio computed directly from the 10 ms activity.
double OverlapFromActivity(const std::vector<RttmRecord>& recs) {
  const auto spk = SpeakersOf(recs);
  ActivityMatrix a = RttmToActivity(recs, 0.01, FramesToCover(recs, 0.01), spk);
  int speech = 0, overlap = 0;
  for (int t = 0; t < a.num_frames(); ++t) {
    speech += a.ActiveCount(t) >= 1;
    overlap += a.ActiveCount(t) >= 2;
  }
  return speech ? static_cast<double>(overlap) / speech : 0.0;
}

TEST(Simulate, SingleSpeakerHasNoOverlap) {
  SpeakerPools pools = MakePools(0, 2);
  SimConfig cfg;
  cfg.duration = 10.0;
  SimulatedMixture m = Simulate(pools, {0}, cfg, 3);
  EXPECT_EQ(m.n_speakers, 1);
  EXPECT_FALSE(m.records.empty());
  EXPECT_EQ(OverlapRatio(m.records), 0.0);
  EXPECT_EQ(m.audio.size(), SecondsToSamples(10.0));
}

TEST(Simulate, MixtureEqualsTrackSum) {
  SpeakerPools pools = MakePools(0, 4);
  SimConfig cfg;
  cfg.duration = 8.0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    for (bool noise : {false, true}) {
      SimulatedMixture m = Simulate(pools, {0, 1, 2}, cfg, seed, noise);
      ASSERT_EQ(m.tracks.size(), 3u);
      double worst = 0.0;
      for (size_t i = 0; i < m.audio.size(); ++i) {
        double sum = 0.0;
        for (const auto& tr : m.tracks) sum += tr[i];
        if (noise) sum += m.scaled_noise[i];
        worst = std::max(worst, std::abs(sum - m.audio.samples[i] / m.output_gain));
      }
      EXPECT_LE(worst, 1e-6);
      EXPECT_LE(PeakAbs(m.audio.samples), 1.0);
    }
  }
}

TEST(Simulate, TracksSilentOutsideRecords) {
  SpeakerPools pools = MakePools(0, 2);
  SimConfig cfg;
  cfg.duration = 8.0;
  SimulatedMixture m = Simulate(pools, {0, 1}, cfg, 11, false);
  for (size_t s = 0; s < 2; ++s) {
    std::vector<bool> covered(m.audio.size(), false);
    for (const auto& r : m.records) {
      if (r.speaker != "s" + std::to_string(s)) continue;
      const size_t a = SecondsToSamples(r.onset), b = std::min(m.audio.size(), SecondsToSamples(r.End()));
      for (size_t i = a; i < b; ++i) covered[i] = true;
    }
    for (size_t i = 0; i < m.audio.size(); ++i) {
      if (!covered[i]) ASSERT_EQ(m.tracks[s][i], 0.0f) << "speaker " << s << " sample " << i;
    }
  }
}

TEST(Simulate, RecordsSortedAndOnMillisecondGrid) {
  SpeakerPools pools = MakePools(0, 4);
  SimConfig cfg;
  SimulatedMixture m = Simulate(pools, {0, 1, 2, 3}, cfg, 7);
  for (size_t i = 0; i < m.records.size(); ++i) {
    const auto& r = m.records[i];
    EXPECT_NEAR(r.onset * 1000, std::round(r.onset * 1000), 1e-6);
    EXPECT_NEAR(r.duration * 1000, std::round(r.duration * 1000), 1e-6);
    EXPECT_GT(r.duration, 0.0);
    EXPECT_LE(r.End(), cfg.duration + 1e-9);
    if (i) EXPECT_LE(m.records[i - 1].onset, r.onset);
  }
  EXPECT_EQ(ParseRttm(EmitRttm(m.records)), m.records);
}

TEST(Simulate, OverlapDecreasesWithGapMean) {
  SpeakerPools pools = MakePools(0, 10);
  double prev = 2.0;
  for (double beta : {0.5, 2.0, 8.0}) {
    SimConfig cfg;
    cfg.duration = 20.0;
    cfg.gap_mean = beta;
    double total = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int a = i % 10, b = (i + 1 + i / 10) % 10;
      SimulatedMixture m = Simulate(pools, {std::min(a, b), std::max(a, b)}, cfg, 500 + i, false);
      const double r = OverlapRatio(m.records);
      EXPECT_NEAR(r, OverlapFromActivity(m.records), 1e-12);
      total += r;
    }
    EXPECT_LT(total / 50, prev) << "gap_mean " << beta;
    prev = total / 50;
  }
}

TEST(Simulate, RttmActivityRoundtrip) {
  SpeakerPools pools = MakePools(0, 4);
  SimConfig cfg;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    SimulatedMixture m = Simulate(pools, {0, 1, 2, 3}, cfg, seed);
    const auto spk = SpeakersOf(m.records);
    const int frames = FramesToCover(m.records, 0.01);
    ActivityMatrix a = RttmToActivity(m.records, 0.01, frames, spk);
    std::vector<RttmRecord> back = PosteriorsToRttm(a, 0.01, "f");
    EXPECT_EQ(RttmToActivity(back, 0.01, frames, spk), a);
    EXPECT_EQ(RttmToActivity(ParseRttm(EmitRttm(back)), 0.01, frames, spk), a);
    for (const auto& r : back) {
      bool near_onset = false, near_end = false;
      for (const auto& o : m.records) {
        if (o.speaker != r.speaker) continue;
        near_onset |= std::abs(o.onset - r.onset) <= 0.01 + 1e-9;
        near_end |= std::abs(o.End() - r.End()) <= 0.01 + 1e-9;
      }
      EXPECT_TRUE(near_onset && near_end);
    }
  }
}

TEST(OverlapRatio, HandExample) {
  std::vector<RttmRecord> recs = {{"f", 0.0, 2.0, "A"}, {"f", 1.0, 2.0, "B"}};
  EXPECT_NEAR(OverlapRatio(recs), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(OverlapRatio({}), 0.0);
}

TEST(Simulate, EmptyPoolThrows) {
  std::vector<Waveform> empty;
  std::vector<const std::vector<Waveform>*> sel = {&empty};
  Rng rng(1);
  EXPECT_THROW(SimulateConversation(sel, {"a"}, {}, SimConfig(), rng, "f"), SimulationError);
}

TEST(GenerateCorpus, LayoutAndDeterminism) {
  SpeakerPools pools = MakePools(0, 6, 2);
  std::vector<Waveform> noises = {SynthNoise(0, 8.0, 1)};
  SimConfig cfg;
  cfg.n_speakers_choices = {1, 2};
  cfg.duration = 6.0;
  cfg.seed = 42;
  sidpt_test::ScopedTempDir d1("sim1"), d2("sim2");
  auto m1 = GenerateCorpus(cfg, pools, noises, d1.path().string());
  auto m2 = GenerateCorpus(cfg, pools, noises, d2.path().string());
  ASSERT_EQ(m1.size(), 40u);
  std::set<std::string> ids;
  for (size_t i = 0; i < m1.size(); ++i) {
    EXPECT_EQ(m1[i].n_speakers, i < 20 ? 1 : 2);
    EXPECT_TRUE(ids.insert(m1[i].file_id).second);
    for (const std::string& rel : {m1[i].wav_path, m1[i].rttm_path}) {
      EXPECT_EQ(sidpt_test::ReadFile(d1.File(rel)), sidpt_test::ReadFile(d2.File(rel))) << rel;
    }
    const auto recs = ReadRttm(d1.File(m1[i].rttm_path));
    EXPECT_LE(static_cast<int>(SpeakersOf(recs).size()), m1[i].n_speakers);
    EXPECT_EQ(ReadWav(d1.File(m1[i].wav_path)).size(), SecondsToSamples(6.0));
  }
  EXPECT_EQ(m1[0].file_id, "sim_n1_00000");
  EXPECT_EQ(m1[20].file_id, "sim_n2_00000");
  EXPECT_EQ(sidpt_test::ReadFile(d1.File("manifest.jsonl")), sidpt_test::ReadFile(d2.File("manifest.jsonl")));

  cfg.n_speakers_choices = {7};
  EXPECT_THROW(GenerateCorpus(cfg, pools, noises, d1.path().string()), SimulationError);
}

TEST(SimConfig, JsonAndValidation) {
  SimConfig c;
  EXPECT_EQ(SimConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());
  EXPECT_THROW(SimConfig::FromJson({{"gap_mean", 0.0}}), ConfigError);
  EXPECT_THROW(SimConfig::FromJson({{"n_speakers_choices", {0}}}), ConfigError);
  EXPECT_THROW(SimConfig::FromJson({{"beta", 1.0}}), ConfigError);
}

}  // namespace
}  // namespace sidpt
