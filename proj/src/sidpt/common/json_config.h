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

#ifndef SIDPT_COMMON_JSON_CONFIG_H_
#define SIDPT_COMMON_JSON_CONFIG_H_

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "sidpt/common/error.h"

namespace sidpt {

// Throws ConfigError naming `section` when j is not an object or holds a
// key outside `allowed`.
inline void CheckKnownKeys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                           const std::string& section) {
  if (!j.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(section + ": unknown key '" + item.key() + "'");
  }
}

// Reads j[key] into *out when present; type errors become ConfigError.
template <typename T>
void ReadKey(const nlohmann::json& j, const char* key, T* out, const std::string& section) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    *out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

}  // namespace sidpt

#endif  // SIDPT_COMMON_JSON_CONFIG_H_
