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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sidpt/common/error.h"
#include "sidpt/data/activity.h"
#include "sidpt/data/manifest.h"
#include "sidpt/data/rttm.h"
#include "sidpt/data/synth.h"
#include "sidpt/data/vad.h"
#include "sidpt/data/waveform.h"
#include "sidpt/features/logmel.h"
#include "test_util.h"

namespace sidpt {
namespace {

using sidpt_test::ScopedTempDir;

void WriteRawWav(const std::string& path, int channels, int rate, int bits,
                 const std::vector<int16_t>& data) {
  auto u32 = [](std::string* s, uint32_t v) {
    for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [](std::string* s, uint16_t v) {
    s->push_back(static_cast<char>(v & 0xff));
    s->push_back(static_cast<char>(v >> 8));
  };
  std::string out = "RIFF";
  const uint32_t bytes = static_cast<uint32_t>(data.size() * 2);
  u32(&out, 36 + bytes);
  out += "WAVEfmt ";
  u32(&out, 16);
  u16(&out, 1);
  u16(&out, static_cast<uint16_t>(channels));
  u32(&out, static_cast<uint32_t>(rate));
  u32(&out, static_cast<uint32_t>(rate * channels * bits / 8));
  u16(&out, static_cast<uint16_t>(channels * bits / 8));
  u16(&out, static_cast<uint16_t>(bits));
  out += "data";
  u32(&out, bytes);
  for (int16_t v : data) u16(&out, static_cast<uint16_t>(v));
  sidpt_test::WriteFile(path, out);
}

TEST(Wav, LengthPreserved) {
  ScopedTempDir dir;
  WriteRawWav(dir.File("a.wav"), 1, 16000, 16, std::vector<int16_t>(48000, 7));
  EXPECT_EQ(ReadWav(dir.File("a.wav")).size(), 48000u);
}

TEST(Wav, Int16Scaling) {
  ScopedTempDir dir;
  WriteRawWav(dir.File("a.wav"), 1, 16000, 16, {32767, -32768, 0});
  Waveform w = ReadWav(dir.File("a.wav"));
  EXPECT_FLOAT_EQ(w.samples[0], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(w.samples[1], -1.0f);
  EXPECT_FLOAT_EQ(w.samples[2], 0.0f);
}

TEST(Wav, StereoRejected) {
  ScopedTempDir dir;
  WriteRawWav(dir.File("s.wav"), 2, 16000, 16, {1, 2, 3, 4});
  EXPECT_THROW(ReadWav(dir.File("s.wav")), FormatError);
}

TEST(Wav, WrongRateRejected) {
  ScopedTempDir dir;
  WriteRawWav(dir.File("r.wav"), 1, 8000, 16, {1, 2});
  EXPECT_THROW(ReadWav(dir.File("r.wav")), FormatError);
}

TEST(Wav, GarbageAndMissing) {
  ScopedTempDir dir;
  sidpt_test::WriteFile(dir.File("g.wav"), "not a wav file at all");
  EXPECT_THROW(ReadWav(dir.File("g.wav")), FormatError);
  EXPECT_THROW(ReadWav(dir.File("missing.wav")), IoError);
}

TEST(Wav, SilenceFileSize) {
  ScopedTempDir dir;
  WriteWav(dir.File("z.wav"), Waveform(std::vector<float>(16000, 0.0f)));
  EXPECT_EQ(ReadWav(dir.File("z.wav")).size(), 16000u);
  EXPECT_EQ(std::filesystem::file_size(dir.File("z.wav")), 44u + 32000u);
}

TEST(Wav, RoundtripQuantization) {
  ScopedTempDir dir;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(-0.99f, 0.99f);
  std::vector<float> x(5000);
  for (float& v : x) v = u(rng);
  WriteWav(dir.File("r.wav"), Waveform(x));
  Waveform back = ReadWav(dir.File("r.wav"));
  ASSERT_EQ(back.size(), x.size());
  for (size_t i = 0; i < x.size(); ++i) EXPECT_LE(std::abs(back.samples[i] - x[i]), 1.0 / 32768);
}

TEST(Wav, Clipping) {
  ScopedTempDir dir;
  WriteWav(dir.File("c.wav"), Waveform({1.5f, -1.5f}));
  Waveform back = ReadWav(dir.File("c.wav"));
  EXPECT_FLOAT_EQ(back.samples[0], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(back.samples[1], -1.0f);
}

TEST(Rttm, ParseOneLine) {
  auto recs = ParseRttm("SPEAKER f 1 0.50 1.25 <NA> <NA> A <NA> <NA>\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0], (RttmRecord{"f", 0.50, 1.25, "A"}));
}

TEST(Rttm, EmptyAndComments) {
  EXPECT_TRUE(ParseRttm("").empty());
  EXPECT_TRUE(ParseRttm("\n   \n").empty());
}

TEST(Rttm, MalformedOnset) {
  try {
    ParseRttm("SPEAKER f 1 x 1.0 <NA> <NA> A <NA> <NA>\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(Rttm, BadLineNumberReported) {
  try {
    ParseRttm("SPEAKER f 1 0 1 <NA> <NA> A <NA> <NA>\nSPEAKER f 1 0 -1 <NA> <NA> A <NA> <NA>\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Rttm, EmitOneLine) {
  EXPECT_EQ(EmitRttm({{"f", 0.5, 1.25, "A"}}),
            "SPEAKER f 1 0.500 1.250 <NA> <NA> A <NA> <NA>\n");
}

TEST(Rttm, MillisRounding) {
  EXPECT_EQ(FormatMillis(1.2345), "1.234");
  EXPECT_EQ(FormatMillis(0.0005), "0.000");
  EXPECT_EQ(FormatMillis(0.0015), "0.002");
  EXPECT_EQ(FormatMillis(12.0), "12.000");
}

TEST(Rttm, RandomRoundtrip) {
  std::mt19937_64 rng(11);
  std::vector<RttmRecord> recs;
  for (int i = 0; i < 100; ++i) {
    RttmRecord r;
    r.file_id = "file" + std::to_string(i % 3);
    r.onset = std::uniform_int_distribution<int>(0, 100000)(rng) / 1000.0;
    r.duration = std::uniform_int_distribution<int>(1, 9000)(rng) / 1000.0;
    r.speaker = "spk" + std::to_string(i % 5);
    recs.push_back(r);
  }
  EXPECT_EQ(ParseRttm(EmitRttm(recs)), recs);
  ScopedTempDir dir;
  WriteRttm(dir.File("x.rttm"), recs);
  EXPECT_EQ(ReadRttm(dir.File("x.rttm")), recs);
}

TEST(Activity, FullRow) {
  auto a = RttmToActivity({{"f", 0.0, 1.0, "A"}}, 0.01, 100, {"A"});
  EXPECT_EQ(a.RowSum(0), 100);
}

TEST(Activity, NoRecords) {
  auto a = RttmToActivity({}, 0.01, 50, {"A", "B"});
  EXPECT_EQ(a.RowSum(0) + a.RowSum(1), 0);
}

TEST(Activity, HalfFrameRule) {
  // [5 ms, 15 ms) covers exactly half of frames 0 and 1; both qualify.
  auto a = RttmToActivity({{"f", 0.005, 0.01, "A"}}, 0.01, 10, {"A"});
  EXPECT_EQ(a.RowSum(0), 2);
  auto one = RttmToActivity({{"f", 0.004, 0.01, "A"}}, 0.01, 10, {"A"});
  EXPECT_EQ(one.RowSum(0), 1);
  EXPECT_TRUE(one.at(0, 0));
  // 4.9 ms of frame 0 is under half.
  auto b = RttmToActivity({{"f", 0.0051, 0.0049, "A"}}, 0.01, 10, {"A"});
  EXPECT_EQ(b.RowSum(0), 0);
}

TEST(Activity, UnknownSpeakerAndClipping) {
  EXPECT_THROW(RttmToActivity({{"f", 0.0, 1.0, "B"}}, 0.01, 10, {"A"}), LabelError);
  auto a = RttmToActivity({{"f", 0.05, 10.0, "A"}}, 0.01, 10, {"A"});
  EXPECT_EQ(a.RowSum(0), 5);
}

TEST(Activity, DuplicateOrder) {
  EXPECT_THROW(ActivityMatrix(2, 3, 0.01, {"A", "A"}), LabelError);
}

TEST(Activity, PermuteAndSlice) {
  ActivityMatrix a(2, 4, 0.01);
  a.set(0, 0, true);
  a.set(1, 3, true);
  auto p = a.PermuteRows({1, -1, 0});
  EXPECT_EQ(p.num_speakers(), 3);
  EXPECT_TRUE(p.at(0, 3));
  EXPECT_EQ(p.RowSum(1), 0);
  EXPECT_TRUE(p.at(2, 0));
  auto s = a.SliceFrames(2, 2);
  EXPECT_EQ(s.num_frames(), 2);
  EXPECT_TRUE(s.at(1, 1));
  EXPECT_THROW(a.SliceFrames(3, 2), ShapeError);
}

TEST(Activity, FramesToCover) {
  EXPECT_EQ(FramesToCover({{"f", 0.0, 1.0, "A"}, {"f", 0.5, 0.755, "B"}}, 0.01), 126);
  EXPECT_EQ(SpeakersOf({{"f", 0, 1, "B"}, {"f", 0, 1, "A"}, {"f", 1, 1, "B"}}),
            (std::vector<std::string>{"B", "A"}));
}

Waveform Tone(double seconds, double amp) {
  std::vector<float> x(SecondsToSamples(seconds));
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<float>(amp * std::sin(2 * M_PI * 440.0 * i / kSampleRate));
  }
  return Waveform(x);
}

TEST(Vad, Silence) {
  EXPECT_TRUE(EnergyVad(Waveform(std::vector<float>(16000, 0.0f)), 0.02, -30).empty());
}

TEST(Vad, FullScaleTone) {
  auto segs = EnergyVad(Tone(2.0, 1.0), 0.02, -30);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_DOUBLE_EQ(segs[0].onset, 0.0);
  EXPECT_DOUBLE_EQ(segs[0].duration, 2.0);
}

TEST(Vad, ToneGapTone) {
  Waveform w = Tone(1.0, 0.5);
  std::vector<float> gap(16000, 0.0f);
  Waveform t2 = Tone(1.0, 0.5);
  w.samples.insert(w.samples.end(), gap.begin(), gap.end());
  w.samples.insert(w.samples.end(), t2.samples.begin(), t2.samples.end());
  auto segs = EnergyVad(w, 0.02, -30);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_NEAR(segs[0].onset, 0.0, 1e-9);
  EXPECT_NEAR(segs[0].duration, 1.0, 1e-9);
  EXPECT_NEAR(segs[1].onset, 2.0, 1e-9);
  EXPECT_NEAR(segs[1].duration, 1.0, 1e-9);
  EXPECT_EQ(TrimSilence(w).size(), 32000u);
}

TEST(Crop, Lengths) {
  Rng rng(1);
  EXPECT_EQ(CropRandom(Tone(10.0, 0.1), 3.0, rng).size(), 48000u);
  Waveform short_wave = Tone(2.0, 0.1);
  Waveform c = CropRandom(short_wave, 3.0, rng);
  ASSERT_EQ(c.size(), 48000u);
  // Repetition: sample i and i + n agree.
  for (size_t i = 0; i + short_wave.size() < c.size(); i += 997) {
    EXPECT_EQ(c.samples[i], c.samples[i + short_wave.size()]);
  }
  EXPECT_THROW(CropRandom(Waveform(), 3.0, rng), LengthError);
}

TEST(Crop, Deterministic) {
  Waveform w = SynthSpeakerUtterance(3, 8.0, 5);
  Rng a(42), b(42);
  EXPECT_EQ(CropRandom(w, 3.0, a).samples, CropRandom(w, 3.0, b).samples);
}

TEST(Synth, DeterministicAndLength) {
  Waveform a = SynthSpeakerUtterance(4, 3.0, 9);
  Waveform b = SynthSpeakerUtterance(4, 3.0, 9);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.size(), 48000u);
  EXPECT_NE(SynthSpeakerUtterance(4, 3.0, 10).samples, a.samples);
}

RowVector LongTermSpectrum(const Waveform& w) {
  FeatureSequence f = LogMel(w);
  RowVector s = RowVector::Zero(f.dim());
  for (int t = 0; t < f.num_frames(); ++t) s += f.values.row(t).array().exp().matrix();
  return s;
}

TEST(Synth, SpeakersSpectrallyDistinct) {
  RowVector s0 = LongTermSpectrum(SynthSpeakerUtterance(0, 6.0, 1));
  RowVector s1 = LongTermSpectrum(SynthSpeakerUtterance(1, 6.0, 1));
  const double cosine = s0.dot(s1) / (s0.norm() * s1.norm());
  EXPECT_LT(cosine, 0.99);
}

TEST(Synth, NoiseAndErrors) {
  EXPECT_EQ(SynthNoise(0, 1.5, 2).size(), 24000u);
  EXPECT_THROW(SynthSpeakerUtterance(-1, 1.0, 0), LabelError);
  EXPECT_THROW(SynthSpeakerUtterance(0, 0.0, 0), LengthError);
}

TEST(Manifest, UtteranceJson) {
  UtteranceRecord r{"wav/a.wav", 3, 2.5, Subset::kVal};
  UtteranceRecord back = UtteranceFromJson(ToJson(r));
  EXPECT_EQ(back.audio_path, r.audio_path);
  EXPECT_EQ(back.speaker_label, 3);
  EXPECT_EQ(back.subset, Subset::kVal);
  EXPECT_THROW(UtteranceFromJson(ToJson(r), 3), LabelError);
  nlohmann::json bad = ToJson(r);
  bad["duration"] = 0.0;
  EXPECT_THROW(UtteranceFromJson(bad), FormatError);
}

TEST(Manifest, Trials) {
  const std::string text =
      "target a.wav b.wav s_vs_s\n"
      "nontarget a.wav m.wav s_vs_m\n";
  auto trials = ParseTrials(text);
  ASSERT_EQ(trials.size(), 2u);
  EXPECT_TRUE(trials[0].target);
  EXPECT_EQ(trials[1].condition, TrialCondition::kSingleVsMulti);
  EXPECT_EQ(trials[1].MaxTestEmbeddings(), 2);
  EXPECT_EQ(trials[1].MaxEnrollEmbeddings(), 1);
  EXPECT_EQ(EmitTrials(trials), text);
  EXPECT_THROW(ParseTrials("maybe a b s_vs_s\n"), ParseError);
  EXPECT_THROW(ParseTrials("target a b\n"), ParseError);
}

TEST(Manifest, RelativePaths) {
  ScopedTempDir dir;
  sidpt_test::WriteFile(dir.File("trials.txt"), "target x/a.wav /abs/b.wav m_vs_m\n");
  auto trials = ReadTrials(dir.File("trials.txt"));
  EXPECT_EQ(trials[0].enroll_path, dir.File("x/a.wav"));
  EXPECT_EQ(trials[0].test_path, "/abs/b.wav");
}

TEST(Manifest, JsonLines) {
  ScopedTempDir dir;
  WriteJsonLines(dir.File("m.jsonl"), {{{"a", 1}}, {{"a", 2}}});
  AppendJsonLine(dir.File("m.jsonl"), {{"a", 3}});
  auto rows = ReadJsonLines(dir.File("m.jsonl"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2]["a"], 3);
  sidpt_test::WriteFile(dir.File("bad.jsonl"), "{\"a\": 1}\n{oops\n");
  EXPECT_THROW(ReadJsonLines(dir.File("bad.jsonl")), ParseError);
}

}  // namespace
}  // namespace sidpt
