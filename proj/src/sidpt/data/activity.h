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

#ifndef SIDPT_DATA_ACTIVITY_H_
#define SIDPT_DATA_ACTIVITY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sidpt/data/rttm.h"

namespace sidpt {

// S x T binary speaker activity on a fixed frame grid.
class ActivityMatrix {
 public:
  ActivityMatrix() = default;
  ActivityMatrix(int num_speakers, int num_frames, double frame_shift,
                 std::vector<std::string> speaker_order = {});

  int num_speakers() const { return num_speakers_; }
  int num_frames() const { return num_frames_; }
  double frame_shift() const { return frame_shift_; }
  const std::vector<std::string>& speaker_order() const { return speaker_order_; }

  uint8_t at(int s, int t) const { return values_[Index(s, t)]; }
  void set(int s, int t, bool active) { values_[Index(s, t)] = active ? 1 : 0; }

  // Number of active speakers in frame t.
  int ActiveCount(int t) const;
  int RowSum(int s) const;

  // Rows reordered (or padded with zero rows) so that row i of the result
  // is row order[i] of this matrix; order[i] < 0 yields a zero row.
  ActivityMatrix PermuteRows(const std::vector<int>& order) const;
  // Frames [start, start + count) as a new matrix.
  ActivityMatrix SliceFrames(int start, int count) const;

  bool operator==(const ActivityMatrix& o) const {
    return num_speakers_ == o.num_speakers_ && num_frames_ == o.num_frames_ &&
           values_ == o.values_;
  }

 private:
  size_t Index(int s, int t) const {
    return static_cast<size_t>(s) * static_cast<size_t>(num_frames_) +
           static_cast<size_t>(t);
  }

  int num_speakers_ = 0;
  int num_frames_ = 0;
  double frame_shift_ = 0.01;
  std::vector<std::string> speaker_order_;
  std::vector<uint8_t> values_;
};

// Frame t is active for speaker s iff [t*shift, (t+1)*shift) intersects one
// of s's segments by at least shift/2. Boundaries are compared on an integer
// microsecond grid so the rule is exact for millisecond-resolution RTTM.
// Throws LabelError for speakers missing from speaker_order.
ActivityMatrix RttmToActivity(const std::vector<RttmRecord>& records,
                              double frame_shift, int num_frames,
                              const std::vector<std::string>& speaker_order);

// Speakers in order of first appearance.
std::vector<std::string> SpeakersOf(const std::vector<RttmRecord>& records);

// Number of frames needed to cover every record end.
int FramesToCover(const std::vector<RttmRecord>& records, double frame_shift);

}  // namespace sidpt

#endif  // SIDPT_DATA_ACTIVITY_H_
