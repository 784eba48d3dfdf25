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

#include "sidpt/nn/adam.h"

#include <cmath>

namespace sidpt::nn {

void Adam::Step(ParameterSet* params, const ParameterSet& grads, double lr) {
  ++steps_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
  for (auto& [name, value] : params->entries()) {
    if (!grads.Has(name)) continue;
    const Matrix& g = grads.Get(name);
    if (!m_.Has(name)) {
      m_.Add(name, Matrix::Zero(value.rows(), value.cols()));
      v_.Add(name, Matrix::Zero(value.rows(), value.cols()));
    }
    Matrix& m = m_.Get(name);
    Matrix& v = v_.Get(name);
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    value.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg_.eps);
  }
}

}  // namespace sidpt::nn
