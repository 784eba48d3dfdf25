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

#ifndef SIDPT_NN_ADAM_H_
#define SIDPT_NN_ADAM_H_

#include "sidpt/nn/parameters.h"

namespace sidpt::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moment buffers are keyed by parameter name and
// created lazily; parameters without a gradient entry are left untouched.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void Step(ParameterSet* params, const ParameterSet& grads, double lr);
  long steps() const { return steps_; }

 private:
  AdamConfig cfg_;
  long steps_ = 0;
  ParameterSet m_;
  ParameterSet v_;
};

}  // namespace sidpt::nn

#endif  // SIDPT_NN_ADAM_H_
