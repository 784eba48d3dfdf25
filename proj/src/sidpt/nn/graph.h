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

#ifndef SIDPT_NN_GRAPH_H_
#define SIDPT_NN_GRAPH_H_

#include <deque>
#include <functional>
#include <string>
#include <unordered_map>

#include "sidpt/common/matrix.h"
#include "sidpt/nn/parameters.h"

namespace sidpt::nn {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }
  Graph* graph() const { return graph_; }
  int id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Tape for reverse-mode differentiation. Nodes are appended in evaluation
// order, which is a topological order, so Backward is a single reverse sweep.
class Graph {
 public:
  using BackwardFn = std::function<void(const Matrix& out_grad)>;

  // With track_grad = false every leaf is a constant and no backward
  // closures are kept (inference).
  explicit Graph(bool track_grad = true) : track_grad_(track_grad) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Constant(Matrix value);
  // Leaf that receives a gradient.
  Var Input(Matrix value);
  // Leaf bound to a named parameter; repeated calls return the same node.
  Var Param(const ParameterSet& params, const std::string& name);

  // Appends a computed node. `fn` is only kept when requires_grad is true.
  Var Emit(Matrix value, bool requires_grad, BackwardFn fn);

  bool RequiresGrad(Var v) const { return nodes_[v.id_].requires_grad; }
  void AccumulateGrad(Var v, const Matrix& g);

  // Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1 x 1.
  void Backward(Var loss);

  // Gradient of the last Backward w.r.t. v (zeros if v got none).
  Matrix Grad(Var v) const;
  // Gradients of every parameter touched by this graph.
  ParameterSet ParamGrads() const;

  const Matrix& ValueOf(int id) const { return nodes_[id].value; }
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool has_grad = false;
    bool requires_grad = false;
    BackwardFn backward;
  };

  bool track_grad_ = true;
  std::deque<Node> nodes_;
  std::unordered_map<std::string, int> params_;
};

}  // namespace sidpt::nn

#endif  // SIDPT_NN_GRAPH_H_
