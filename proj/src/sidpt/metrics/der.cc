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

#include "sidpt/metrics/der.h"

#include <algorithm>

#include "sidpt/common/error.h"
#include "sidpt/metrics/hungarian.h"

namespace sidpt {

Matrix CoActivity(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  const int frames = std::min(ref.num_frames(), hyp.num_frames());
  Matrix co = Matrix::Zero(ref.num_speakers(), hyp.num_speakers());
  for (int r = 0; r < ref.num_speakers(); ++r) {
    for (int h = 0; h < hyp.num_speakers(); ++h) {
      long long n = 0;
      for (int t = 0; t < frames; ++t) n += ref.at(r, t) & hyp.at(h, t);
      co(r, h) = static_cast<double>(n);
    }
  }
  return co;
}

SpeakerMapping OptimalMapping(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  const Matrix co = CoActivity(ref, hyp);
  SpeakerMapping m;
  m.hyp_to_ref = MaxWeightAssignment(co.transpose());
  for (size_t h = 0; h < m.hyp_to_ref.size(); ++h) {
    if (m.hyp_to_ref[h] >= 0) {
      m.matched_frames += static_cast<long long>(co(m.hyp_to_ref[h], static_cast<int>(h)));
    }
  }
  return m;
}

DerBreakdown& DerBreakdown::operator+=(const DerBreakdown& o) {
  miss += o.miss;
  false_alarm += o.false_alarm;
  confusion += o.confusion;
  total_speech += o.total_speech;
  der = total_speech > 0 ? (miss + false_alarm + confusion) / total_speech : 0.0;
  return *this;
}

nlohmann::json DerBreakdown::ToJson() const {
  return {{"miss", miss},
          {"false_alarm", false_alarm},
          {"confusion", confusion},
          {"total_speech", total_speech},
          {"der", der}};
}

DerBreakdown DerComponents(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  const SpeakerMapping map = OptimalMapping(ref, hyp);
  const int frames = std::max(ref.num_frames(), hyp.num_frames());
  long long miss = 0, fa = 0, conf = 0, speech = 0;
  for (int t = 0; t < frames; ++t) {
    const int n_ref = t < ref.num_frames() ? ref.ActiveCount(t) : 0;
    const int n_hyp = t < hyp.num_frames() ? hyp.ActiveCount(t) : 0;
    int correct = 0;
    if (t < ref.num_frames() && t < hyp.num_frames()) {
      for (int h = 0; h < hyp.num_speakers(); ++h) {
        const int r = map.hyp_to_ref[h];
        if (r >= 0 && hyp.at(h, t) && ref.at(r, t)) ++correct;
      }
    }
    miss += std::max(0, n_ref - n_hyp);
    fa += std::max(0, n_hyp - n_ref);
    conf += std::min(n_ref, n_hyp) - correct;
    speech += n_ref;
  }
  const double shift = ref.frame_shift();
  DerBreakdown d;
  d.miss = static_cast<double>(miss) * shift;
  d.false_alarm = static_cast<double>(fa) * shift;
  d.confusion = static_cast<double>(conf) * shift;
  d.total_speech = static_cast<double>(speech) * shift;
  d.der = speech > 0 ? static_cast<double>(miss + fa + conf) / static_cast<double>(speech) : 0.0;
  return d;
}

DerBreakdown ComputeDer(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  DerBreakdown d = DerComponents(ref, hyp);
  if (!(d.total_speech > 0)) throw MetricError("DER undefined: reference has no speech");
  return d;
}

DerBreakdown ComputeDer(const std::vector<RttmRecord>& ref, const std::vector<RttmRecord>& hyp,
                        double frame_shift) {
  const int frames = std::max(FramesToCover(ref, frame_shift), FramesToCover(hyp, frame_shift));
  return ComputeDer(RttmToActivity(ref, frame_shift, frames, SpeakersOf(ref)),
                    RttmToActivity(hyp, frame_shift, frames, SpeakersOf(hyp)));
}

}  // namespace sidpt
