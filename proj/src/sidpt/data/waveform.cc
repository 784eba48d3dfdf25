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

#include "sidpt/data/waveform.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sidpt/common/error.h"

namespace sidpt {

namespace {

uint32_t ReadU32(const char* p) {
  return static_cast<uint32_t>(static_cast<uint8_t>(p[0])) |
         (static_cast<uint32_t>(static_cast<uint8_t>(p[1])) << 8) |
         (static_cast<uint32_t>(static_cast<uint8_t>(p[2])) << 16) |
         (static_cast<uint32_t>(static_cast<uint8_t>(p[3])) << 24);
}

uint16_t ReadU16(const char* p) {
  return static_cast<uint16_t>(static_cast<uint8_t>(p[0]) |
                               (static_cast<uint8_t>(p[1]) << 8));
}

void PutU32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw FormatError(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string id = bytes.substr(pos, 4);
    uint32_t size = ReadU32(bytes.data() + pos + 4);
    size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Truncated trailing chunk; tolerate only for data (streamed writers).
      if (id != "data") break;
      size = static_cast<uint32_t>(bytes.size() - body);
    }
    if (id == "fmt ") {
      if (size < 16) throw FormatError(path + ": fmt chunk too short");
      const char* f = bytes.data() + body;
      uint16_t format = ReadU16(f);
      uint16_t channels = ReadU16(f + 2);
      uint32_t rate = ReadU32(f + 4);
      uint16_t bits = ReadU16(f + 14);
      if (format != 1 && format != 0xfffe) {
        throw FormatError(path + ": audio format " + std::to_string(format) +
                          " is not PCM");
      }
      if (channels != 1) {
        throw FormatError(path + ": channel count " + std::to_string(channels) +
                          " (expected 1)");
      }
      if (rate != kSampleRate) {
        throw FormatError(path + ": sample rate " + std::to_string(rate) +
                          " (expected 16000)");
      }
      if (bits != 16) {
        throw FormatError(path + ": bit depth " + std::to_string(bits) +
                          " (expected 16)");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError(path + ": data chunk before fmt chunk");
      size_t n = size / 2;
      Waveform wave;
      wave.source_id = path;
      wave.samples.resize(n);
      const char* d = bytes.data() + body;
      for (size_t i = 0; i < n; ++i) {
        auto v = static_cast<int16_t>(ReadU16(d + 2 * i));
        wave.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      return wave;
    }
    pos = body + size + (size & 1);
  }
  throw FormatError(path + ": no data chunk");
}

void WriteWav(const std::string& path, const Waveform& wave) {
  const auto n = static_cast<uint32_t>(wave.samples.size());
  std::string out;
  out.reserve(44 + 2 * static_cast<size_t>(n));
  out += "RIFF";
  PutU32(&out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, kSampleRate);
  PutU32(&out, kSampleRate * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, 2 * n);
  for (float s : wave.samples) {
    double x = std::clamp(static_cast<double>(s), -1.0, 1.0);
    long q = std::lround(x * 32768.0);
    q = std::clamp(q, -32768L, 32767L);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

Waveform CropRandom(const Waveform& wave, double duration, Rng& rng) {
  if (!(duration > 0)) throw LengthError("crop duration must be positive");
  if (wave.empty()) throw LengthError("cannot crop an empty waveform");
  const size_t want = SecondsToSamples(duration);
  Waveform out;
  out.source_id = wave.source_id;
  out.samples.resize(want);
  const size_t n = wave.size();
  if (n <= want) {
    // Wrap-pad: tile the input, then take `want` samples from a random start
    // inside the first period.
    size_t start = n == want ? 0 : std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    for (size_t i = 0; i < want; ++i) out.samples[i] = wave.samples[(start + i) % n];
  } else {
    size_t start = std::uniform_int_distribution<size_t>(0, n - want)(rng);
    std::copy_n(wave.samples.begin() + static_cast<std::ptrdiff_t>(start), want,
                out.samples.begin());
  }
  return out;
}

double Rms(const std::vector<float>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

double PeakAbs(const std::vector<float>& samples) {
  double peak = 0.0;
  for (float s : samples) peak = std::max(peak, std::fabs(static_cast<double>(s)));
  return peak;
}

}  // namespace sidpt
