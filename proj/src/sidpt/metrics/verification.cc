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

#include "sidpt/metrics/verification.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sidpt/common/error.h"

namespace sidpt {

double ScoreTrial(const std::vector<RowVector>& enroll, const std::vector<RowVector>& test) {
  if (enroll.empty() || test.empty()) throw MetricError("trial side without embeddings");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& a : enroll) {
    const double na = a.norm();
    if (!(na > 0)) throw MetricError("zero-norm enrolment embedding");
    for (const auto& b : test) {
      const double nb = b.norm();
      if (!(nb > 0)) throw MetricError("zero-norm test embedding");
      best = std::max(best, a.dot(b) / (na * nb));
    }
  }
  return best;
}

double ComputeEer(const std::vector<double>& scores, const std::vector<bool>& targets) {
  if (scores.size() != targets.size()) throw MetricError("scores/targets size mismatch");
  const auto n_tar = std::count(targets.begin(), targets.end(), true);
  const auto n_non = static_cast<long>(targets.size()) - n_tar;
  if (n_tar == 0 || n_non == 0) throw MetricError("EER needs both target and non-target trials");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Walk thresholds upward. Initially everything is accepted.
  struct Point {
    double far, frr;
  };
  std::vector<Point> points;
  long rejected_tar = 0, rejected_non = 0;
  points.push_back({1.0, 0.0});
  size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (targets[order[i]]) {
        ++rejected_tar;
      } else {
        ++rejected_non;
      }
      ++i;
    }
    points.push_back({static_cast<double>(n_non - rejected_non) / static_cast<double>(n_non),
                      static_cast<double>(rejected_tar) / static_cast<double>(n_tar)});
  }
  // FAR is non-increasing and FRR non-decreasing along `points`.
  for (size_t k = 1; k < points.size(); ++k) {
    const Point a = points[k - 1], b = points[k];
    if (b.far <= b.frr) {
      const double da = a.far - a.frr;  // >= 0
      const double db = b.far - b.frr;  // <= 0
      if (da == db) return a.far;
      const double lambda = da / (da - db);
      return a.far + lambda * (b.far - a.far);
    }
  }
  return points.back().far;
}

}  // namespace sidpt
