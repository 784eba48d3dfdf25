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

#include "sidpt/nn/parameters.h"

#include <cmath>

#include "sidpt/common/error.h"

namespace sidpt::nn {

Matrix& ParameterSet::Add(const std::string& name, Matrix value) {
  auto [it, inserted] = values_.insert_or_assign(name, std::move(value));
  return it->second;
}

Matrix& ParameterSet::Get(const std::string& name) {
  auto it = values_.find(name);
  if (it == values_.end()) throw CheckpointError("missing parameter '" + name + "'");
  return it->second;
}

const Matrix& ParameterSet::Get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw CheckpointError("missing parameter '" + name + "'");
  return it->second;
}

size_t ParameterSet::NumScalars() const {
  size_t n = 0;
  for (const auto& [name, m] : values_) n += static_cast<size_t>(m.size());
  return n;
}

ParameterSet ParameterSet::WithPrefix(const std::string& prefix) const {
  ParameterSet out;
  for (const auto& [name, m] : values_) {
    if (name.compare(0, prefix.size(), prefix) == 0) out.Add(name, m);
  }
  return out;
}

size_t ParameterSet::EraseWithPrefix(const std::string& prefix) {
  size_t n = 0;
  for (auto it = values_.begin(); it != values_.end();) {
    if (it->first.compare(0, prefix.size(), prefix) == 0) {
      it = values_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

void ParameterSet::Merge(const ParameterSet& other) {
  for (const auto& [name, m] : other.values_) values_[name] = m;
}

ParameterSet ParameterSet::ZerosLike() const {
  ParameterSet out;
  for (const auto& [name, m] : values_) out.Add(name, Matrix::Zero(m.rows(), m.cols()));
  return out;
}

void ParameterSet::AddScaled(const ParameterSet& other, double scale) {
  for (auto& [name, m] : values_) {
    auto it = other.values_.find(name);
    if (it == other.values_.end()) continue;
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) {
      throw ShapeError("shape mismatch for '" + name + "'");
    }
    m += scale * it->second;
  }
}

double ParameterSet::MaxAbs() const {
  double v = 0.0;
  for (const auto& [name, m] : values_) {
    if (m.size() > 0) v = std::max(v, m.cwiseAbs().maxCoeff());
  }
  return v;
}

bool ParameterSet::AllFinite() const {
  for (const auto& [name, m] : values_) {
    if (!m.allFinite()) return false;
  }
  return true;
}

Matrix UniformFanIn(int rows, int cols, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

}  // namespace sidpt::nn
