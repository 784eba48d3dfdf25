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

#ifndef SIDPT_METRICS_VERIFICATION_H_
#define SIDPT_METRICS_VERIFICATION_H_

#include <vector>

#include "sidpt/common/matrix.h"

namespace sidpt {

// Max over enrol/test pairs of the cosine similarity. Throws MetricError
// for empty sides or zero-norm embeddings.
double ScoreTrial(const std::vector<RowVector>& enroll, const std::vector<RowVector>& test);

// Equal error rate. Thresholds sit below all scores, at midpoints between
// consecutive distinct scores, and above all scores; a trial is accepted
// when its score exceeds the threshold. The EER is the false-acceptance rate
// where the FAR and FRR curves cross, interpolated linearly between the two
// operating points that bracket the crossing. Throws MetricError unless
// both classes are present.
double ComputeEer(const std::vector<double>& scores, const std::vector<bool>& targets);

}  // namespace sidpt

#endif  // SIDPT_METRICS_VERIFICATION_H_
