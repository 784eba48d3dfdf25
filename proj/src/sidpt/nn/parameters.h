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

#ifndef SIDPT_NN_PARAMETERS_H_
#define SIDPT_NN_PARAMETERS_H_

#include <map>
#include <string>

#include "sidpt/common/matrix.h"
#include "sidpt/common/random.h"

namespace sidpt::nn {

// Name-keyed parameter storage. Iteration order is the lexicographic order
// of names, so nothing downstream depends on insertion order.
class ParameterSet {
 public:
  using Map = std::map<std::string, Matrix>;

  Matrix& Add(const std::string& name, Matrix value);
  bool Has(const std::string& name) const { return values_.count(name) > 0; }
  Matrix& Get(const std::string& name);
  const Matrix& Get(const std::string& name) const;

  Map& entries() { return values_; }
  const Map& entries() const { return values_; }
  size_t size() const { return values_.size(); }
  size_t NumScalars() const;

  // Copies every entry whose name starts with `prefix`.
  ParameterSet WithPrefix(const std::string& prefix) const;
  // Removes every entry whose name starts with `prefix`; returns the count.
  size_t EraseWithPrefix(const std::string& prefix);
  // Overwrites/inserts all entries of `other`.
  void Merge(const ParameterSet& other);

  // Zero-initialized set with identical names and shapes.
  ParameterSet ZerosLike() const;
  // this += scale * other, over names present in both.
  void AddScaled(const ParameterSet& other, double scale);
  // Largest absolute element, over all entries.
  double MaxAbs() const;
  bool AllFinite() const;

 private:
  Map values_;
};

// U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Matrix UniformFanIn(int rows, int cols, int fan_in, Rng& rng);

}  // namespace sidpt::nn

#endif  // SIDPT_NN_PARAMETERS_H_
