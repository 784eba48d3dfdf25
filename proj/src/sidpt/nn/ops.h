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

#ifndef SIDPT_NN_OPS_H_
#define SIDPT_NN_OPS_H_

#include <vector>

#include "sidpt/nn/graph.h"

namespace sidpt::nn {

// Elementwise arithmetic; operands must have identical shapes.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double s);
Var AddScalar(Var a, double s);
Var OneMinus(Var a);
// a / s for a 1 x 1 node s.
Var DivScalar(Var a, Var s);
// a * s for a 1 x 1 node s.
Var MulScalar(Var a, Var s);

Var MatMul(Var a, Var b);
Var Transpose(Var a);

// a (n x m) + row (1 x m) broadcast over rows.
Var AddRowBroadcast(Var a, Var row);
// Each row i of a (n x m) multiplied by col(i) (n x 1).
Var MulColBroadcast(Var a, Var col);
// Stacks n copies of a 1 x m row.
Var BroadcastRows(Var row, int n);

Var Relu(Var a);
Var Tanh(Var a);
Var Sigmoid(Var a);
Var Exp(Var a);
Var Log(Var a);
Var Square(Var a);
// sqrt(max(a, 0)); the derivative is taken as 0 where a <= floor.
Var Sqrt(Var a, double floor = 1e-12);
// log(1 + exp(a)), computed stably.
Var Softplus(Var a);

Var SumAll(Var a);
Var MeanAll(Var a);
// Sum over rows: n x m -> 1 x m.
Var ColSums(Var a);
// Mean over rows: n x m -> 1 x m.
Var MeanRows(Var a);
// Sum over columns: n x m -> n x 1.
Var RowSums(Var a);
// Largest element as 1 x 1; the gradient goes to the first argmax.
Var MaxAll(Var a);

Var ConcatCols(const std::vector<Var>& parts);
Var ConcatRows(const std::vector<Var>& parts);
Var SliceRows(Var a, int start, int count);
Var SliceCols(Var a, int start, int count);

Var SoftmaxRows(Var a);
Var LogSoftmaxRows(Var a);
// Softmax over a column vector (T x 1).
Var SoftmaxCol(Var logits);
// a_t = w_t exp(l_t) / sum_u w_u exp(l_u): softmax of (logits + log weights)
// without forming log 0. logits and weights are T x 1, weights >= 0 with a
// positive sum.
Var MaskedSoftmaxCol(Var logits, Var weights);
// out(i) = a(i, index[i]); n x 1.
Var PickPerRow(Var a, const std::vector<int>& index);
// Rows scaled to unit L2 norm (norm clamped below by eps).
Var NormalizeRows(Var a, double eps = 1e-12);

// 1-D dilated convolution over time with zero "same" padding.
// x: T x Cin; weight: (kernel * Cin) x Cout, tap-major; bias: 1 x Cout.
// Output frame t sees input frames t + (j - (kernel-1)/2) * dilation.
Var Conv1d(Var x, Var weight, Var bias, int kernel, int dilation);

// Single-layer LSTM over time. x: T x I; w_ih: I x 4H; w_hh: H x 4H;
// bias: 1 x 4H; gate order i, f, g, o. Returns T x H hidden states; with
// reverse = true the recursion runs from the last frame to the first.
Var Lstm(Var x, Var w_ih, Var w_hh, Var bias, bool reverse);

// Additive angular margin logits from cosines (1 x C):
// scale * cos(acos(c) + margin) for the label column, scale * c elsewhere.
Var AamLogits(Var cosines, int label, double margin, double scale);

}  // namespace sidpt::nn

#endif  // SIDPT_NN_OPS_H_
