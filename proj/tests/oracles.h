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

// Brute-force reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library code it checks.

#ifndef SIDPT_TESTS_ORACLES_H_
#define SIDPT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sidpt/common/matrix.h"
#include "sidpt/data/activity.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/parameters.h"

namespace sidpt_test {

using sidpt::ActivityMatrix;
using sidpt::Matrix;

inline ActivityMatrix RandomActivity(int speakers, int frames, double p, std::mt19937_64& rng) {
  ActivityMatrix a(speakers, frames, 0.01);
  std::bernoulli_distribution on(p);
  for (int s = 0; s < speakers; ++s) {
    for (int t = 0; t < frames; ++t) a.set(s, t, on(rng));
  }
  return a;
}

// Random activity with at most `max_overlap` speakers per frame.
inline ActivityMatrix RandomCappedActivity(int speakers, int frames, int max_overlap,
                                           std::mt19937_64& rng) {
  ActivityMatrix a(speakers, frames, 0.01);
  for (int t = 0; t < frames; ++t) {
    std::vector<int> ids(speakers);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    const int k = std::uniform_int_distribution<int>(0, std::min(max_overlap, speakers))(rng);
    for (int i = 0; i < k; ++i) a.set(ids[i], t, true);
  }
  return a;
}

// Calls fn on every permutation of {0..n-1} (Heap's algorithm).
inline void ForEachPermutation(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> c(n, 0);
  fn(p);
  int i = 1;
  while (i < n) {
    if (c[i] < i) {
      std::swap(p[i % 2 == 0 ? 0 : c[i]], p[i]);
      fn(p);
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

// min over row permutations of the mean element-wise BCE; y padded with
// silent rows up to p.rows().
inline double PitBceOracle(const Matrix& p, const ActivityMatrix& y) {
  const int s = static_cast<int>(p.rows());
  const int t_len = static_cast<int>(p.cols());
  double best = std::numeric_limits<double>::infinity();
  ForEachPermutation(s, [&](const std::vector<int>& perm) {
    double sum = 0.0;
    for (int i = 0; i < s; ++i) {
      for (int t = 0; t < t_len; ++t) {
        const int r = perm[i];
        const double target = (r < y.num_speakers() && y.at(r, t)) ? 1.0 : 0.0;
        sum += -(target * std::log(p(i, t)) + (1.0 - target) * std::log(1.0 - p(i, t)));
      }
    }
    best = std::min(best, sum / (s * t_len));
  });
  return best;
}

// Classes ordered by size, then lexicographically.
inline std::vector<std::vector<int>> EnumerateSubsets(int n, int max_size) {
  std::vector<std::vector<int>> out;
  for (int size = 0; size <= max_size; ++size) {
    std::vector<std::vector<int>> level;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != size) continue;
      std::vector<int> set;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) set.push_back(i);
      }
      level.push_back(set);
    }
    std::sort(level.begin(), level.end());
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// min over speaker permutations of the frame-mean cross-entropy against the
// powerset class of the permuted reference.
inline double PowersetLossOracle(const Matrix& logits, const ActivityMatrix& y, int max_speakers,
                                 int max_overlap) {
  const auto classes = EnumerateSubsets(max_speakers, max_overlap);
  const int t_len = static_cast<int>(logits.rows());
  double best = std::numeric_limits<double>::infinity();
  ForEachPermutation(max_speakers, [&](const std::vector<int>& perm) {
    double sum = 0.0;
    for (int t = 0; t < t_len; ++t) {
      std::vector<int> active;
      for (int slot = 0; slot < max_speakers; ++slot) {
        const int r = perm[slot];
        if (r < y.num_speakers() && y.at(r, t)) active.push_back(slot);
      }
      const auto it = std::find(classes.begin(), classes.end(), active);
      const int k = static_cast<int>(it - classes.begin());
      double z = 0.0;
      for (int j = 0; j < logits.cols(); ++j) z += std::exp(logits(t, j));
      sum += std::log(z) - logits(t, k);
    }
    best = std::min(best, sum / t_len);
  });
  return best;
}

// Largest total co-activity over injective hyp -> ref maps.
inline long long BestMatchedFrames(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  const int n_ref = ref.num_speakers();
  const int n_hyp = hyp.num_speakers();
  const int frames = std::min(ref.num_frames(), hyp.num_frames());
  // Enumerate permutations of max(n_ref, n_hyp) slots; slots beyond a side
  // are dummies.
  const int n = std::max(n_ref, n_hyp);
  long long best = 0;
  ForEachPermutation(n, [&](const std::vector<int>& perm) {
    long long m = 0;
    for (int h = 0; h < n_hyp; ++h) {
      const int r = perm[h];
      if (r >= n_ref) continue;
      for (int t = 0; t < frames; ++t) m += ref.at(r, t) && hyp.at(h, t);
    }
    best = std::max(best, m);
  });
  return best;
}

// Frame-level DER minimized over all injective label maps, in frames.
inline double DerOracle(const ActivityMatrix& ref, const ActivityMatrix& hyp) {
  const int frames = std::max(ref.num_frames(), hyp.num_frames());
  auto active = [](const ActivityMatrix& a, int s, int t) {
    return t < a.num_frames() && a.at(s, t);
  };
  long long speech = 0;
  for (int t = 0; t < frames; ++t) {
    for (int s = 0; s < ref.num_speakers(); ++s) speech += active(ref, s, t);
  }
  const int n = std::max(ref.num_speakers(), hyp.num_speakers());
  double best = std::numeric_limits<double>::infinity();
  ForEachPermutation(n, [&](const std::vector<int>& perm) {
    long long err = 0;
    for (int t = 0; t < frames; ++t) {
      int nr = 0, nh = 0, correct = 0;
      for (int s = 0; s < ref.num_speakers(); ++s) nr += active(ref, s, t);
      for (int h = 0; h < hyp.num_speakers(); ++h) {
        if (!active(hyp, h, t)) continue;
        ++nh;
        if (perm[h] < ref.num_speakers() && active(ref, perm[h], t)) ++correct;
      }
      err += std::max(nr, nh) - correct;
    }
    best = std::min(best, static_cast<double>(err) / static_cast<double>(speech));
  });
  return best;
}

// EER by sweeping every midpoint threshold (accept iff score > threshold)
// plus both extremes, then intersecting FAR and FRR between the two
// adjacent operating points where FAR - FRR changes sign.
inline double EerOracle(const std::vector<double>& scores, const std::vector<bool>& targets) {
  std::vector<double> u = scores;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::vector<double> thresholds{-std::numeric_limits<double>::infinity()};
  for (size_t i = 0; i + 1 < u.size(); ++i) thresholds.push_back(0.5 * (u[i] + u[i + 1]));
  thresholds.push_back(std::numeric_limits<double>::infinity());
  double n_tar = 0, n_non = 0;
  for (bool t : targets) (t ? n_tar : n_non) += 1;
  std::vector<double> far, frr;
  for (double th : thresholds) {
    double fa = 0, fr = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool accept = scores[i] > th;
      if (targets[i] && !accept) fr += 1;
      if (!targets[i] && accept) fa += 1;
    }
    far.push_back(fa / n_non);
    frr.push_back(fr / n_tar);
  }
  for (size_t k = 1; k < thresholds.size(); ++k) {
    const double d0 = far[k - 1] - frr[k - 1];
    const double d1 = far[k] - frr[k];
    if (d0 >= 0 && d1 <= 0) {
      if (d0 == d1) return far[k - 1];
      // Intersection of the two linear segments.
      const double x = d0 / (d0 - d1);
      return far[k - 1] + x * (far[k] - far[k - 1]);
    }
  }
  return far.back();
}

// Central finite differences against graph gradients. `build` must
// construct the scalar loss from the given input leaves and parameters on a
// fresh graph. Returns the largest relative error over every input and
// parameter element; the denominator is floored at `floor`.
using LossBuilder = std::function<sidpt::nn::Var(sidpt::nn::Graph&, const std::vector<sidpt::nn::Var>&,
                                                 const sidpt::nn::ParameterSet&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;
  int checked = 0;
};

inline GradCheckResult CheckGradients(const LossBuilder& build, std::vector<Matrix> inputs,
                                      sidpt::nn::ParameterSet params, double eps = 1e-4,
                                      double floor = 1e-6) {
  using sidpt::nn::Graph;
  using sidpt::nn::Var;
  auto eval = [&](const std::vector<Matrix>& xs, const sidpt::nn::ParameterSet& ps) {
    Graph g;
    std::vector<Var> leaves;
    for (const auto& x : xs) leaves.push_back(g.Input(x));
    return build(g, leaves, ps).scalar();
  };

  Graph g;
  std::vector<Var> leaves;
  for (const auto& x : inputs) leaves.push_back(g.Input(x));
  Var loss = build(g, leaves, params);
  g.Backward(loss);
  std::vector<Matrix> input_grads;
  for (Var v : leaves) input_grads.push_back(g.Grad(v));
  const sidpt::nn::ParameterSet param_grads = g.ParamGrads();

  GradCheckResult res;
  auto record = [&](double analytic, double numeric, const std::string& where) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    const double rel = std::abs(analytic - numeric) / denom;
    ++res.checked;
    if (rel > res.max_rel_error) {
      res.max_rel_error = rel;
      res.worst = where + " analytic=" + std::to_string(analytic) +
                  " numeric=" + std::to_string(numeric);
    }
  };
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (Eigen::Index k = 0; k < inputs[i].size(); ++k) {
      const double orig = inputs[i].data()[k];
      inputs[i].data()[k] = orig + eps;
      const double up = eval(inputs, params);
      inputs[i].data()[k] = orig - eps;
      const double down = eval(inputs, params);
      inputs[i].data()[k] = orig;
      record(input_grads[i].data()[k], (up - down) / (2 * eps),
             "input" + std::to_string(i) + "[" + std::to_string(k) + "]");
    }
  }
  for (auto& [name, value] : params.entries()) {
    const bool has = param_grads.Has(name);
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      const double orig = value.data()[k];
      value.data()[k] = orig + eps;
      const double up = eval(inputs, params);
      value.data()[k] = orig - eps;
      const double down = eval(inputs, params);
      value.data()[k] = orig;
      record(has ? param_grads.Get(name).data()[k] : 0.0, (up - down) / (2 * eps),
             name + "[" + std::to_string(k) + "]");
    }
  }
  return res;
}

}  // namespace sidpt_test

#endif  // SIDPT_TESTS_ORACLES_H_
