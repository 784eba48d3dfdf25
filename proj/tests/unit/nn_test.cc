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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sidpt/common/error.h"
#include "sidpt/nn/adam.h"
#include "sidpt/nn/checkpoint.h"
#include "sidpt/nn/graph.h"
#include "sidpt/nn/ops.h"
#include "sidpt/nn/parameters.h"
#include "test_util.h"

namespace sidpt::nn {
namespace {

using sidpt_test::CheckGradients;

Matrix RandomMatrix(int r, int c, uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Contracts an op output with fixed random weights so every output element
// contributes a distinct gradient.
Var Contract(Graph& g, Var y, uint64_t seed) {
  return SumAll(Mul(y, g.Constant(RandomMatrix(y.rows(), y.cols(), seed))));
}

constexpr double kTol = 1e-4;

struct UnaryCase {
  std::string name;
  std::function<Var(Var)> op;
  double lo, hi;
};

TEST(OpGradients, Unary) {
  const std::vector<UnaryCase> cases = {
      {"Scale", [](Var a) { return Scale(a, -2.5); }, -1, 1},
      {"AddScalar", [](Var a) { return AddScalar(a, 0.3); }, -1, 1},
      {"OneMinus", [](Var a) { return OneMinus(a); }, -1, 1},
      {"Transpose", [](Var a) { return Transpose(a); }, -1, 1},
      {"Relu", [](Var a) { return Relu(a); }, -1, 1},
      {"Tanh", [](Var a) { return Tanh(a); }, -2, 2},
      {"Sigmoid", [](Var a) { return Sigmoid(a); }, -3, 3},
      {"Exp", [](Var a) { return Exp(a); }, -1, 1},
      {"Log", [](Var a) { return Log(a); }, 0.2, 2},
      {"Square", [](Var a) { return Square(a); }, -1, 1},
      {"Sqrt", [](Var a) { return Sqrt(a); }, 0.1, 2},
      {"Softplus", [](Var a) { return Softplus(a); }, -3, 3},
      {"SumAll", [](Var a) { return SumAll(a); }, -1, 1},
      {"MeanAll", [](Var a) { return MeanAll(a); }, -1, 1},
      {"ColSums", [](Var a) { return ColSums(a); }, -1, 1},
      {"MeanRows", [](Var a) { return MeanRows(a); }, -1, 1},
      {"RowSums", [](Var a) { return RowSums(a); }, -1, 1},
      {"MaxAll", [](Var a) { return MaxAll(a); }, -1, 1},
      {"SliceRows", [](Var a) { return SliceRows(a, 1, 3); }, -1, 1},
      {"SliceCols", [](Var a) { return SliceCols(a, 1, 2); }, -1, 1},
      {"SoftmaxRows", [](Var a) { return SoftmaxRows(a); }, -2, 2},
      {"LogSoftmaxRows", [](Var a) { return LogSoftmaxRows(a); }, -2, 2},
      {"NormalizeRows", [](Var a) { return NormalizeRows(a); }, -1, 1},
      {"BroadcastRows", [](Var a) { return BroadcastRows(SliceRows(a, 0, 1), 3); }, -1, 1},
      {"PickPerRow", [](Var a) { return PickPerRow(a, {0, 3, 1, 2, 3}); }, -1, 1},
      {"SoftmaxCol", [](Var a) { return SoftmaxCol(SliceCols(a, 0, 1)); }, -2, 2},
  };
  uint64_t seed = 100;
  for (const auto& c : cases) {
    auto build = [&](Graph& g, const std::vector<Var>& in, const ParameterSet&) {
      return Contract(g, c.op(in[0]), seed + 1);
    };
    auto res = CheckGradients(build, {RandomMatrix(5, 4, seed, c.lo, c.hi)}, {});
    EXPECT_LT(res.max_rel_error, kTol) << c.name << ": " << res.worst;
    ++seed;
  }
}

TEST(OpGradients, Binary) {
  auto check = [](const std::string& name, int ra, int ca, int rb, int cb,
                  std::function<Var(Var, Var)> op, double lo = -1, double hi = 1) {
    auto build = [&](Graph& g, const std::vector<Var>& in, const ParameterSet&) {
      return Contract(g, op(in[0], in[1]), 7);
    };
    auto res = CheckGradients(build, {RandomMatrix(ra, ca, 1), RandomMatrix(rb, cb, 2, lo, hi)}, {});
    EXPECT_LT(res.max_rel_error, kTol) << name << ": " << res.worst;
  };
  check("Add", 3, 4, 3, 4, Add);
  check("Sub", 3, 4, 3, 4, Sub);
  check("Mul", 3, 4, 3, 4, Mul);
  check("MatMul", 3, 4, 4, 2, MatMul);
  check("DivScalar", 3, 4, 1, 1, DivScalar, 0.5, 2.0);
  check("MulScalar", 3, 4, 1, 1, MulScalar);
  check("AddRowBroadcast", 3, 4, 1, 4, AddRowBroadcast);
  check("MulColBroadcast", 3, 4, 3, 1, MulColBroadcast);
  check("ConcatCols", 3, 4, 3, 2, [](Var a, Var b) { return ConcatCols({a, b, a}); });
  check("ConcatRows", 3, 4, 2, 4, [](Var a, Var b) { return ConcatRows({b, a}); });
  check("MaskedSoftmaxCol", 6, 1, 6, 1, MaskedSoftmaxCol, 0.05, 1.0);
}

TEST(OpGradients, Conv1d) {
  for (int dilation : {1, 2, 3}) {
    auto build = [&](Graph& g, const std::vector<Var>& in, const ParameterSet&) {
      return Contract(g, Conv1d(in[0], in[1], in[2], 3, dilation), 9);
    };
    auto res = CheckGradients(
        build, {RandomMatrix(8, 4, 1), RandomMatrix(12, 5, 2), RandomMatrix(1, 5, 3)}, {});
    EXPECT_LT(res.max_rel_error, kTol) << "dilation " << dilation << ": " << res.worst;
  }
}

TEST(OpGradients, Lstm) {
  const int hid = 3;
  for (bool reverse : {false, true}) {
    auto build = [&](Graph& g, const std::vector<Var>& in, const ParameterSet&) {
      return Contract(g, Lstm(in[0], in[1], in[2], in[3], reverse), 5);
    };
    auto res = CheckGradients(build,
                              {RandomMatrix(8, 4, 1), RandomMatrix(4, 4 * hid, 2, -0.5, 0.5),
                               RandomMatrix(hid, 4 * hid, 3, -0.5, 0.5),
                               RandomMatrix(1, 4 * hid, 4, -0.5, 0.5)},
                              {});
    EXPECT_LT(res.max_rel_error, kTol) << "reverse " << reverse << ": " << res.worst;
  }
}

TEST(OpGradients, AamLogits) {
  auto build = [](Graph& g, const std::vector<Var>& in, const ParameterSet&) {
    return Contract(g, AamLogits(in[0], 2, 0.2, 30.0), 3);
  };
  auto res = CheckGradients(build, {RandomMatrix(1, 6, 8, -0.9, 0.9)}, {});
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(OpGradients, ParametersThroughGraph) {
  ParameterSet p;
  p.Add("w", RandomMatrix(4, 3, 1));
  p.Add("b", RandomMatrix(1, 3, 2));
  p.Add("unused", RandomMatrix(2, 2, 3));
  auto build = [](Graph& g, const std::vector<Var>& in, const ParameterSet& ps) {
    Var h = Tanh(AddRowBroadcast(MatMul(in[0], g.Param(ps, "w")), g.Param(ps, "b")));
    // Reusing a parameter node must accumulate both uses.
    return SumAll(Mul(h, AddRowBroadcast(h, g.Param(ps, "b"))));
  };
  auto res = CheckGradients(build, {RandomMatrix(5, 4, 4)}, p);
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(Graph, ForwardValues) {
  Graph g(false);
  Var a = g.Constant(RandomMatrix(2, 3, 1));
  Var s = SoftmaxRows(a);
  EXPECT_NEAR(s.value().row(0).sum(), 1.0, 1e-12);
  Var l = LogSoftmaxRows(a);
  EXPECT_NEAR((l.value().array().exp() - s.value().array()).abs().maxCoeff(), 0.0, 1e-12);
  Var n = NormalizeRows(a);
  EXPECT_NEAR(n.value().row(1).norm(), 1.0, 1e-12);
  EXPECT_THROW(MatMul(a, a), ShapeError);
  EXPECT_THROW(g.Backward(a), ShapeError);
}

TEST(Graph, MaskedSoftmaxZerosOutsideMask) {
  Graph g(false);
  Matrix w = Matrix::Zero(6, 1);
  w(1, 0) = 1.0;
  w(4, 0) = 0.5;
  Var a = MaskedSoftmaxCol(g.Constant(RandomMatrix(6, 1, 2)), g.Constant(w));
  EXPECT_EQ(a.value()(0, 0), 0.0);
  EXPECT_EQ(a.value()(5, 0), 0.0);
  EXPECT_NEAR(a.value().sum(), 1.0, 1e-12);
  EXPECT_THROW(MaskedSoftmaxCol(g.Constant(Matrix::Zero(3, 1)), g.Constant(Matrix::Zero(3, 1))),
               DegenerateInputError);
}

TEST(Graph, ConvLocality) {
  Graph g(false);
  Matrix x = Matrix::Zero(20, 1);
  x(10, 0) = 1.0;
  Var y = Conv1d(g.Constant(x), g.Constant(Matrix::Ones(3, 1)), g.Constant(Matrix::Zero(1, 1)), 3, 4);
  for (int t = 0; t < 20; ++t) {
    EXPECT_EQ(y.value()(t, 0), (t == 6 || t == 10 || t == 14) ? 1.0 : 0.0) << t;
  }
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ParameterSet p;
  p.Add("w", Matrix::Constant(1, 2, 1.0));
  ParameterSet g;
  g.Add("w", (Matrix(1, 2) << 0.5, -2.0).finished());
  Adam adam;
  adam.Step(&p, g, 0.1);
  EXPECT_NEAR(p.Get("w")(0, 0), 0.9, 1e-6);
  EXPECT_NEAR(p.Get("w")(0, 1), 1.1, 1e-6);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Adam, MinimizesQuadratic) {
  ParameterSet p;
  p.Add("w", RandomMatrix(3, 3, 5, -3, 3));
  Adam adam;
  for (int i = 0; i < 2000; ++i) {
    ParameterSet g;
    g.Add("w", 2.0 * p.Get("w"));
    adam.Step(&p, g, 0.01);
  }
  EXPECT_LT(p.Get("w").cwiseAbs().maxCoeff(), 1e-2);
}

TEST(ParameterSet, Operations) {
  ParameterSet p;
  p.Add("a.x", Matrix::Ones(2, 2));
  p.Add("a.y", Matrix::Ones(1, 3));
  p.Add("b.z", Matrix::Constant(1, 1, -4.0));
  EXPECT_EQ(p.NumScalars(), 8u);
  EXPECT_EQ(p.WithPrefix("a.").size(), 2u);
  EXPECT_DOUBLE_EQ(p.MaxAbs(), 4.0);
  ParameterSet z = p.ZerosLike();
  z.AddScaled(p, 0.5);
  EXPECT_DOUBLE_EQ(z.Get("b.z")(0, 0), -2.0);
  EXPECT_EQ(p.EraseWithPrefix("a."), 2u);
  EXPECT_THROW(p.Get("a.x"), CheckpointError);
  p.Get("b.z")(0, 0) = std::nan("");
  EXPECT_FALSE(p.AllFinite());
}

TEST(Checkpoint, Roundtrip) {
  sidpt_test::ScopedTempDir dir;
  Checkpoint c;
  c.config = {{"kind", "test"}};
  c.meta = {{"epoch", 3}};
  c.params.Add("w", RandomMatrix(3, 4, 1));
  c.params.Add("b", RandomMatrix(1, 4, 2));
  SaveCheckpoint(dir.File("c.ckpt"), c);
  Checkpoint back = LoadCheckpoint(dir.File("c.ckpt"));
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.meta["epoch"], 3);
  for (const auto& [name, m] : c.params.entries()) {
    const Matrix& b = back.params.Get(name);
    ASSERT_EQ(b.rows(), m.rows());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      EXPECT_EQ(b.data()[i], static_cast<double>(static_cast<float>(m.data()[i])));
    }
  }
}

TEST(Checkpoint, CorruptFiles) {
  sidpt_test::ScopedTempDir dir;
  sidpt_test::WriteFile(dir.File("bad.ckpt"), "garbage");
  EXPECT_THROW(LoadCheckpoint(dir.File("bad.ckpt")), CheckpointError);
  EXPECT_THROW(LoadCheckpoint(dir.File("none.ckpt")), IoError);
  Checkpoint c;
  c.params.Add("w", RandomMatrix(30, 30, 1));
  SaveCheckpoint(dir.File("c.ckpt"), c);
  std::string bytes = sidpt_test::ReadFile(dir.File("c.ckpt"));
  sidpt_test::WriteFile(dir.File("t.ckpt"), bytes.substr(0, bytes.size() - 100));
  EXPECT_THROW(LoadCheckpoint(dir.File("t.ckpt")), CheckpointError);
}

}  // namespace
}  // namespace sidpt::nn
