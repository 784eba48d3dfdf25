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

#ifndef SIDPT_NN_CHECKPOINT_H_
#define SIDPT_NN_CHECKPOINT_H_

#include <string>

#include "json.hpp"
#include "sidpt/nn/parameters.h"

namespace sidpt::nn {

// On-disk layout (all integers little-endian):
//   8 bytes   magic "SIDPTCKP"
//   4 bytes   uint32 header length L
//   L bytes   UTF-8 JSON header:
//               {"schema_version": 1, "config": {...}, "meta": {...},
//                "tensors": [{"name", "rows", "cols", "offset"}, ...]}
//   rest      float32 row-major tensor data; "offset" is in bytes from the
//             start of this section.
inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json meta = nlohmann::json::object();
  ParameterSet params;
};

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace sidpt::nn

#endif  // SIDPT_NN_CHECKPOINT_H_
