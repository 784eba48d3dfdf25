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

#include "sidpt/data/activity.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "sidpt/common/error.h"

namespace sidpt {

ActivityMatrix::ActivityMatrix(int num_speakers, int num_frames,
                               double frame_shift,
                               std::vector<std::string> speaker_order)
    : num_speakers_(num_speakers),
      num_frames_(num_frames),
      frame_shift_(frame_shift),
      speaker_order_(std::move(speaker_order)),
      values_(static_cast<size_t>(num_speakers) * static_cast<size_t>(num_frames), 0) {
  if (num_speakers < 0 || num_frames < 0) throw ShapeError("negative activity shape");
  if (speaker_order_.empty()) {
    for (int s = 0; s < num_speakers; ++s) speaker_order_.push_back(std::to_string(s));
  }
  if (static_cast<int>(speaker_order_.size()) != num_speakers) {
    throw ShapeError("speaker_order size does not match row count");
  }
  std::unordered_set<std::string> seen(speaker_order_.begin(), speaker_order_.end());
  if (seen.size() != speaker_order_.size()) {
    throw LabelError("duplicate speaker in speaker_order");
  }
}

int ActivityMatrix::ActiveCount(int t) const {
  int n = 0;
  for (int s = 0; s < num_speakers_; ++s) n += at(s, t);
  return n;
}

int ActivityMatrix::RowSum(int s) const {
  int n = 0;
  for (int t = 0; t < num_frames_; ++t) n += at(s, t);
  return n;
}

ActivityMatrix ActivityMatrix::PermuteRows(const std::vector<int>& order) const {
  std::vector<std::string> names;
  for (size_t i = 0; i < order.size(); ++i) {
    names.push_back(order[i] >= 0 ? speaker_order_[order[i]]
                                  : "<pad" + std::to_string(i) + ">");
  }
  ActivityMatrix out(static_cast<int>(order.size()), num_frames_, frame_shift_,
                     std::move(names));
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i] < 0) continue;
    for (int t = 0; t < num_frames_; ++t) out.set(static_cast<int>(i), t, at(order[i], t));
  }
  return out;
}

ActivityMatrix ActivityMatrix::SliceFrames(int start, int count) const {
  if (start < 0 || count < 0 || start + count > num_frames_) {
    throw ShapeError("frame slice out of range");
  }
  ActivityMatrix out(num_speakers_, count, frame_shift_, speaker_order_);
  for (int s = 0; s < num_speakers_; ++s) {
    for (int t = 0; t < count; ++t) out.set(s, t, at(s, start + t));
  }
  return out;
}

namespace {
long long Micros(double seconds) { return std::llround(seconds * 1e6); }
}  // namespace

ActivityMatrix RttmToActivity(const std::vector<RttmRecord>& records,
                              double frame_shift, int num_frames,
                              const std::vector<std::string>& speaker_order) {
  ActivityMatrix act(static_cast<int>(speaker_order.size()), num_frames,
                     frame_shift, speaker_order);
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < speaker_order.size(); ++i) {
    index[speaker_order[i]] = static_cast<int>(i);
  }
  const long long shift = Micros(frame_shift);
  if (shift <= 0) throw ShapeError("frame shift must be positive");
  for (const auto& r : records) {
    auto it = index.find(r.speaker);
    if (it == index.end()) throw LabelError("unknown speaker '" + r.speaker + "'");
    const long long on = Micros(r.onset);
    const long long off = on + Micros(r.duration);
    long long first = std::max(0LL, on / shift);
    long long last = std::min<long long>(num_frames - 1, off / shift);
    for (long long t = first; t <= last; ++t) {
      long long lo = std::max(on, t * shift);
      long long hi = std::min(off, (t + 1) * shift);
      if (2 * (hi - lo) >= shift) act.set(it->second, static_cast<int>(t), true);
    }
  }
  return act;
}

std::vector<std::string> SpeakersOf(const std::vector<RttmRecord>& records) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.speaker).second) out.push_back(r.speaker);
  }
  return out;
}

int FramesToCover(const std::vector<RttmRecord>& records, double frame_shift) {
  double end = 0.0;
  for (const auto& r : records) end = std::max(end, r.End());
  return static_cast<int>(std::ceil(end / frame_shift - 1e-9));
}

}  // namespace sidpt
