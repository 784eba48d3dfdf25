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

#ifndef SIDPT_LOSSES_POWERSET_H_
#define SIDPT_LOSSES_POWERSET_H_

#include <vector>

#include "sidpt/common/matrix.h"
#include "sidpt/data/activity.h"
#include "sidpt/nn/graph.h"

namespace sidpt {

// Sorted 0-based speaker indices.
using SpeakerSet = std::vector<int>;

// All subsets of {0..S-1} with at most max_overlap members: the empty set,
// then singletons ascending, then pairs lexicographically, and so on.
std::vector<SpeakerSet> PowersetClasses(int max_speakers, int max_overlap);

class PowersetCodec {
 public:
  explicit PowersetCodec(int max_speakers = 4, int max_overlap = 2);

  int max_speakers() const { return max_speakers_; }
  int max_overlap() const { return max_overlap_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  const std::vector<SpeakerSet>& classes() const { return classes_; }

  // Throws EncodingError if |active| > max_overlap or an index is invalid.
  int Encode(const SpeakerSet& active) const;
  int EncodeMask(unsigned mask) const;
  const SpeakerSet& Decode(int index) const;
  unsigned DecodeMask(int index) const { return masks_.at(index); }

  // Per-frame class targets. y may have fewer rows than max_speakers.
  std::vector<int> EncodeActivity(const ActivityMatrix& y) const;
  // max_speakers x T activity from per-frame classes.
  ActivityMatrix DecodeSequence(const std::vector<int>& classes, double frame_shift) const;
  // Argmax class per row of a T x K score matrix.
  std::vector<int> Argmax(const Matrix& scores) const;

 private:
  int max_speakers_;
  int max_overlap_;
  std::vector<SpeakerSet> classes_;
  std::vector<unsigned> masks_;
  std::vector<int> index_of_mask_;
};

// Result of a minimum over speaker permutations. permutation[i] is the row
// of the (zero-padded) reference assigned to output slot i.
struct PermutationLoss {
  double loss = 0.0;
  std::vector<int> permutation;
};

// Min over permutations of the padded reference rows of the mean frame
// cross-entropy between softmax(logits) (T x K) and the encoded targets.
PermutationLoss PowersetLoss(const Matrix& logits, const ActivityMatrix& y,
                             const PowersetCodec& codec);

// Differentiable version; the permutation is chosen on values and the loss
// is differentiated for that permutation.
nn::Var PowersetLossGraph(nn::Var logits, const ActivityMatrix& y, const PowersetCodec& codec,
                          std::vector<int>* permutation = nullptr);

// Max-speech reduction applied to training chunks: keep the max_speakers
// rows with the most active frames (ties: lower index), then in frames with
// more than max_overlap active retained speakers keep the max_overlap with
// the most in-chunk speech.
ActivityMatrix ReduceForPowerset(const ActivityMatrix& y, const PowersetCodec& codec);

}  // namespace sidpt

#endif  // SIDPT_LOSSES_POWERSET_H_
