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

#ifndef SIDPT_LOSSES_PIT_H_
#define SIDPT_LOSSES_PIT_H_

#include "sidpt/common/matrix.h"
#include "sidpt/data/activity.h"
#include "sidpt/losses/powerset.h"

namespace sidpt {

// Permutation-free binary cross-entropy: min over assignments of reference
// rows to the S posterior rows of the mean element-wise BCE. Posteriors
// (S x T) must lie in (0, 1); the reference is zero-padded to S rows.
PermutationLoss PitBce(const Matrix& posteriors, const ActivityMatrix& y);

}  // namespace sidpt

#endif  // SIDPT_LOSSES_PIT_H_
