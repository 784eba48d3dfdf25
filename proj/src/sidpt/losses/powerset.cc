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

#include "sidpt/losses/powerset.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sidpt/common/error.h"
#include "sidpt/nn/ops.h"

namespace sidpt {

namespace {

void Combinations(int n, int k, int start, SpeakerSet* cur, std::vector<SpeakerSet>* out) {
  if (static_cast<int>(cur->size()) == k) {
    out->push_back(*cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur->push_back(i);
    Combinations(n, k, i + 1, cur, out);
    cur->pop_back();
  }
}

std::vector<unsigned> FrameMasks(const ActivityMatrix& y) {
  std::vector<unsigned> masks(static_cast<size_t>(y.num_frames()), 0u);
  for (int s = 0; s < y.num_speakers(); ++s) {
    for (int t = 0; t < y.num_frames(); ++t) {
      if (y.at(s, t)) masks[t] |= 1u << s;
    }
  }
  return masks;
}

// Maps a reference mask through a permutation: output slot i is active iff
// reference row perm[i] is active.
unsigned Permute(unsigned mask, const std::vector<int>& perm) {
  unsigned out = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (mask & (1u << perm[i])) out |= 1u << i;
  }
  return out;
}

Matrix LogSoftmax(const Matrix& x) {
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double m = x.row(i).maxCoeff();
    double lse = m + std::log((x.row(i).array() - m).exp().sum());
    y.row(i) = x.row(i).array() - lse;
  }
  return y;
}

}  // namespace

std::vector<SpeakerSet> PowersetClasses(int max_speakers, int max_overlap) {
  if (max_speakers < 0 || max_overlap < 0 || max_overlap > max_speakers) {
    throw EncodingError("powerset needs 0 <= max_overlap <= max_speakers");
  }
  std::vector<SpeakerSet> out;
  for (int k = 0; k <= max_overlap; ++k) {
    SpeakerSet cur;
    Combinations(max_speakers, k, 0, &cur, &out);
  }
  return out;
}

PowersetCodec::PowersetCodec(int max_speakers, int max_overlap)
    : max_speakers_(max_speakers),
      max_overlap_(max_overlap),
      classes_(PowersetClasses(max_speakers, max_overlap)) {
  if (max_speakers > 16) throw EncodingError("powerset codec supports at most 16 speakers");
  index_of_mask_.assign(size_t{1} << max_speakers, -1);
  for (size_t c = 0; c < classes_.size(); ++c) {
    unsigned mask = 0;
    for (int s : classes_[c]) mask |= 1u << s;
    masks_.push_back(mask);
    index_of_mask_[mask] = static_cast<int>(c);
  }
}

int PowersetCodec::EncodeMask(unsigned mask) const {
  if (mask >= index_of_mask_.size() || index_of_mask_[mask] < 0) {
    throw EncodingError("speaker subset with " + std::to_string(std::popcount(mask)) +
                        " members exceeds the powerset (max_overlap " +
                        std::to_string(max_overlap_) + ")");
  }
  return index_of_mask_[mask];
}

int PowersetCodec::Encode(const SpeakerSet& active) const {
  unsigned mask = 0;
  for (int s : active) {
    if (s < 0 || s >= max_speakers_) throw EncodingError("speaker index out of range");
    mask |= 1u << s;
  }
  return EncodeMask(mask);
}

const SpeakerSet& PowersetCodec::Decode(int index) const {
  if (index < 0 || index >= num_classes()) throw EncodingError("class index out of range");
  return classes_[index];
}

std::vector<int> PowersetCodec::EncodeActivity(const ActivityMatrix& y) const {
  if (y.num_speakers() > max_speakers_) {
    throw EncodingError("activity has more rows than the codec's max_speakers");
  }
  std::vector<int> out;
  out.reserve(static_cast<size_t>(y.num_frames()));
  for (unsigned m : FrameMasks(y)) out.push_back(EncodeMask(m));
  return out;
}

ActivityMatrix PowersetCodec::DecodeSequence(const std::vector<int>& classes,
                                             double frame_shift) const {
  ActivityMatrix act(max_speakers_, static_cast<int>(classes.size()), frame_shift);
  for (size_t t = 0; t < classes.size(); ++t) {
    for (int s : Decode(classes[t])) act.set(s, static_cast<int>(t), true);
  }
  return act;
}

std::vector<int> PowersetCodec::Argmax(const Matrix& scores) const {
  if (scores.cols() != num_classes()) throw ShapeError("score width != class count");
  std::vector<int> out(static_cast<size_t>(scores.rows()));
  for (Eigen::Index t = 0; t < scores.rows(); ++t) {
    Eigen::Index k = 0;
    scores.row(t).maxCoeff(&k);
    out[t] = static_cast<int>(k);
  }
  return out;
}

namespace {

// Shared search: returns the best permutation and its loss given per-frame
// log-probabilities.
PermutationLoss SearchPowerset(const Matrix& logp, const ActivityMatrix& y,
                               const PowersetCodec& codec) {
  if (y.num_speakers() > codec.max_speakers()) {
    throw EncodingError("reference has more speakers than the powerset supports");
  }
  if (logp.rows() != y.num_frames()) throw ShapeError("logits and reference differ in length");
  if (logp.cols() != codec.num_classes()) throw ShapeError("logit width != class count");
  const auto masks = FrameMasks(y);
  for (unsigned m : masks) codec.EncodeMask(m);  // overlap check on the unpermuted reference

  std::vector<int> perm(static_cast<size_t>(codec.max_speakers()));
  std::iota(perm.begin(), perm.end(), 0);
  PermutationLoss best;
  best.loss = std::numeric_limits<double>::infinity();
  const double t_len = static_cast<double>(std::max<Eigen::Index>(1, logp.rows()));
  do {
    double total = 0.0;
    for (Eigen::Index t = 0; t < logp.rows(); ++t) {
      total -= logp(t, codec.EncodeMask(Permute(masks[t], perm)));
    }
    const double loss = total / t_len;
    if (loss < best.loss) {
      best.loss = loss;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  // Slots mapped to padding rows are reported as -1.
  for (int& p : best.permutation) {
    if (p >= y.num_speakers()) p = -1;
  }
  return best;
}

}  // namespace

PermutationLoss PowersetLoss(const Matrix& logits, const ActivityMatrix& y,
                             const PowersetCodec& codec) {
  return SearchPowerset(LogSoftmax(logits), y, codec);
}

nn::Var PowersetLossGraph(nn::Var logits, const ActivityMatrix& y, const PowersetCodec& codec,
                          std::vector<int>* permutation) {
  nn::Var logp = nn::LogSoftmaxRows(logits);
  PermutationLoss best = SearchPowerset(logp.value(), y, codec);
  std::vector<int> order = best.permutation;
  // Re-expand padding slots to distinct padded row ids for Permute().
  std::vector<bool> used(static_cast<size_t>(codec.max_speakers()), false);
  for (int p : order) {
    if (p >= 0) used[p] = true;
  }
  for (int& p : order) {
    if (p < 0) {
      int free = 0;
      while (used[free]) ++free;
      used[free] = true;
      p = free;
    }
  }
  const auto masks = FrameMasks(y);
  std::vector<int> targets(masks.size());
  for (size_t t = 0; t < masks.size(); ++t) targets[t] = codec.EncodeMask(Permute(masks[t], order));
  if (permutation) *permutation = best.permutation;
  return nn::Scale(nn::MeanAll(nn::PickPerRow(logp, targets)), -1.0);
}

ActivityMatrix ReduceForPowerset(const ActivityMatrix& y, const PowersetCodec& codec) {
  std::vector<int> order(static_cast<size_t>(y.num_speakers()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> speech(order.size());
  for (int s = 0; s < y.num_speakers(); ++s) speech[s] = y.RowSum(s);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return speech[a] > speech[b]; });
  const int keep = std::min(y.num_speakers(), codec.max_speakers());
  std::vector<int> kept(order.begin(), order.begin() + keep);
  std::sort(kept.begin(), kept.end());
  ActivityMatrix out = y.PermuteRows(kept);

  // Retained rows ranked by in-chunk speech for the overlap cap.
  std::vector<int> rank(static_cast<size_t>(keep));
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](int a, int b) { return speech[kept[a]] > speech[kept[b]]; });
  for (int t = 0; t < out.num_frames(); ++t) {
    if (out.ActiveCount(t) <= codec.max_overlap()) continue;
    int allowed = codec.max_overlap();
    for (int r : rank) {
      if (!out.at(r, t)) continue;
      if (allowed > 0) {
        --allowed;
      } else {
        out.set(r, t, false);
      }
    }
  }
  return out;
}

}  // namespace sidpt
