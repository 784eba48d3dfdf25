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

#ifndef SIDPT_METRICS_DER_H_
#define SIDPT_METRICS_DER_H_

#include <vector>

#include "json.hpp"
#include "sidpt/common/matrix.h"
#include "sidpt/data/activity.h"
#include "sidpt/data/rttm.h"

namespace sidpt {

struct SpeakerMapping {
  std::vector<int> hyp_to_ref;  // -1 for unmapped hypothesis speakers
  long long matched_frames = 0;  // total co-active frames of mapped pairs
};

// Injective hypothesis -> reference map maximising co-active frames.
SpeakerMapping OptimalMapping(const ActivityMatrix& ref, const ActivityMatrix& hyp);

// Co-active frame counts; ref speakers x hyp speakers.
Matrix CoActivity(const ActivityMatrix& ref, const ActivityMatrix& hyp);

struct DerBreakdown {
  double miss = 0.0;          // seconds
  double false_alarm = 0.0;   // seconds
  double confusion = 0.0;     // seconds
  double total_speech = 0.0;  // seconds
  double der = 0.0;

  DerBreakdown& operator+=(const DerBreakdown& o);
  nlohmann::json ToJson() const;
};

// Frame-level DER without collar under the optimal mapping. Matrices of
// different lengths are compared on the longer grid (missing frames are
// inactive). Throws MetricError when the reference has no speech.
DerBreakdown ComputeDer(const ActivityMatrix& ref, const ActivityMatrix& hyp);

// Error components without the final ratio; total_speech may be 0.
DerBreakdown DerComponents(const ActivityMatrix& ref, const ActivityMatrix& hyp);

// Rediscretises both RTTMs on a 10 ms grid (or frame_shift) and scores.
DerBreakdown ComputeDer(const std::vector<RttmRecord>& ref, const std::vector<RttmRecord>& hyp,
                        double frame_shift = 0.01);

}  // namespace sidpt

#endif  // SIDPT_METRICS_DER_H_
