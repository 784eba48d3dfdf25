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

#ifndef SIDPT_CLI_APP_H_
#define SIDPT_CLI_APP_H_

#include <ostream>
#include <string>
#include <vector>

namespace sidpt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Runs one subcommand. args excludes the program name. Returns 0 on
// success, 1 on a domain error, 2 on a usage or configuration error.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sidpt

#endif  // SIDPT_CLI_APP_H_
