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

#ifndef SIDPT_DATA_RTTM_H_
#define SIDPT_DATA_RTTM_H_

#include <string>
#include <string_view>
#include <vector>

namespace sidpt {

struct RttmRecord {
  std::string file_id;
  double onset = 0.0;     // seconds
  double duration = 0.0;  // seconds
  std::string speaker;

  double End() const { return onset + duration; }
  bool operator==(const RttmRecord&) const = default;
};

// One record per SPEAKER line, in file order. Other line types are skipped.
// Throws ParseError carrying the 1-based line number.
std::vector<RttmRecord> ParseRttm(std::string_view text);
std::vector<RttmRecord> ReadRttm(const std::string& path);

// Onsets and durations are printed with 3 decimals, rounded half-to-even.
std::string EmitRttm(const std::vector<RttmRecord>& records);
void WriteRttm(const std::string& path, const std::vector<RttmRecord>& records);

// Rounds to milliseconds, ties to even, and returns the printed text.
std::string FormatMillis(double seconds);

}  // namespace sidpt

#endif  // SIDPT_DATA_RTTM_H_
