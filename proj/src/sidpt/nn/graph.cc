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

#include "sidpt/nn/graph.h"

#include "sidpt/common/error.h"

namespace sidpt::nn {

const Matrix& Var::value() const { return graph_->ValueOf(id_); }

Var Graph::Constant(Matrix value) { return Emit(std::move(value), false, nullptr); }

Var Graph::Input(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = track_grad_;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::Param(const ParameterSet& params, const std::string& name) {
  auto it = params_.find(name);
  if (it != params_.end()) return Var(this, it->second);
  Var v = Input(params.Get(name));
  params_[name] = v.id_;
  return v;
}

Var Graph::Emit(Matrix value, bool requires_grad, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Graph::AccumulateGrad(Var v, const Matrix& g) {
  Node& n = nodes_[v.id_];
  if (!n.requires_grad) return;
  if (g.rows() != n.value.rows() || g.cols() != n.value.cols()) {
    throw ShapeError("gradient shape mismatch");
  }
  if (n.has_grad) {
    n.grad += g;
  } else {
    n.grad = g;
    n.has_grad = true;
  }
}

void Graph::Backward(Var loss) {
  if (loss.graph_ != this) throw ShapeError("loss belongs to another graph");
  if (loss.rows() != 1 || loss.cols() != 1) throw ShapeError("loss must be a scalar");
  for (auto& n : nodes_) {
    n.has_grad = false;
    n.grad.resize(0, 0);
  }
  AccumulateGrad(loss, Matrix::Ones(1, 1));
  for (int i = loss.id_; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.has_grad || !n.backward) continue;
    n.backward(n.grad);
  }
}

Matrix Graph::Grad(Var v) const {
  const Node& n = nodes_[v.id_];
  if (!n.has_grad) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

ParameterSet Graph::ParamGrads() const {
  ParameterSet out;
  for (const auto& [name, id] : params_) out.Add(name, Grad(Var(const_cast<Graph*>(this), id)));
  return out;
}

}  // namespace sidpt::nn
