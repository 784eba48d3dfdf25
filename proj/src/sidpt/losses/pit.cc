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

#include "sidpt/losses/pit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sidpt/common/error.h"

namespace sidpt {

PermutationLoss PitBce(const Matrix& p, const ActivityMatrix& y) {
  const int s_out = static_cast<int>(p.rows());
  if (y.num_speakers() > s_out) throw ShapeError("more reference speakers than outputs");
  if (p.cols() != y.num_frames()) throw ShapeError("posteriors and reference differ in length");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p.data()[i];
    if (!(v > 0.0 && v < 1.0)) throw DegenerateInputError("posteriors must lie in (0, 1)");
  }
  // cost(i, r) = sum_t BCE(p_i, y_r); padding rows are all-zero references.
  Matrix cost(s_out, s_out);
  for (int i = 0; i < s_out; ++i) {
    for (int r = 0; r < s_out; ++r) {
      double c = 0.0;
      for (int t = 0; t < y.num_frames(); ++t) {
        const bool active = r < y.num_speakers() && y.at(r, t);
        c -= active ? std::log(p(i, t)) : std::log1p(-p(i, t));
      }
      cost(i, r) = c;
    }
  }
  const double denom = static_cast<double>(std::max<Eigen::Index>(1, p.size()));
  std::vector<int> perm(static_cast<size_t>(s_out));
  std::iota(perm.begin(), perm.end(), 0);
  PermutationLoss best;
  best.loss = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < s_out; ++i) total += cost(i, perm[i]);
    const double loss = total / denom;
    if (loss < best.loss) {
      best.loss = loss;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int& r : best.permutation) {
    if (r >= y.num_speakers()) r = -1;
  }
  return best;
}

}  // namespace sidpt
