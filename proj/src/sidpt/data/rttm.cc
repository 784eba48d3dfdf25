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

#include "sidpt/data/rttm.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sidpt/common/error.h"

namespace sidpt {

namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double ParseSeconds(std::string_view field, int line, const char* name) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(line, std::string("malformed ") + name + " '" +
                               std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<RttmRecord> ParseRttm(std::string_view text) {
  std::vector<RttmRecord> records;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0] != "SPEAKER") continue;
    if (fields.size() < 8) {
      throw ParseError(line_no, "SPEAKER line has " + std::to_string(fields.size()) +
                                    " fields (expected 10)");
    }
    RttmRecord r;
    r.file_id = std::string(fields[1]);
    r.onset = ParseSeconds(fields[3], line_no, "onset");
    r.duration = ParseSeconds(fields[4], line_no, "duration");
    r.speaker = std::string(fields[7]);
    if (r.onset < 0) throw ParseError(line_no, "negative onset");
    if (r.duration <= 0) throw ParseError(line_no, "non-positive duration");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RttmRecord> ReadRttm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseRttm(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

std::string FormatMillis(double seconds) {
  // nearbyint honours the default FE_TONEAREST mode, i.e. ties go to even.
  auto ms = static_cast<long long>(std::nearbyint(seconds * 1000.0));
  const char* sign = ms < 0 ? "-" : "";
  long long a = ms < 0 ? -ms : ms;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign, a / 1000, a % 1000);
  return buf;
}

std::string EmitRttm(const std::vector<RttmRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += "SPEAKER ";
    out += r.file_id;
    out += " 1 ";
    out += FormatMillis(r.onset);
    out += ' ';
    out += FormatMillis(r.duration);
    out += " <NA> <NA> ";
    out += r.speaker;
    out += " <NA> <NA>\n";
  }
  return out;
}

void WriteRttm(const std::string& path, const std::vector<RttmRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << EmitRttm(records);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sidpt
