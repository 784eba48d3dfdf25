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

#ifndef SIDPT_METRICS_HUNGARIAN_H_
#define SIDPT_METRICS_HUNGARIAN_H_

#include <vector>

#include "sidpt/common/matrix.h"

namespace sidpt {

// Assignment of rows to distinct columns maximising the summed score of a
// rectangular matrix (Kuhn-Munkres, O(n^2 m)). result[i] is the column of
// row i, or -1 when rows outnumber columns and row i is left out.
std::vector<int> MaxWeightAssignment(const Matrix& score);

}  // namespace sidpt

#endif  // SIDPT_METRICS_HUNGARIAN_H_
