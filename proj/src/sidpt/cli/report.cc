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

#include "sidpt/cli/report.h"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "sidpt/common/error.h"

namespace sidpt {

void ResultTable::Add(const std::string& strategy, const std::string& dataset, double value) {
  if (std::find(strategies.begin(), strategies.end(), strategy) == strategies.end()) {
    strategies.push_back(strategy);
  }
  if (std::find(datasets.begin(), datasets.end(), dataset) == datasets.end()) datasets.push_back(dataset);
  der[{strategy, dataset}] = value;
}

ResultTable CollectResults(const std::vector<nlohmann::json>& rows) {
  ResultTable t;
  std::map<std::string, double> best_val;
  std::vector<std::string> tags;
  for (const auto& r : rows) {
    if (r.contains("strategy") && r.contains("dataset") && r.contains("der")) {
      t.Add(r["strategy"].get<std::string>(), r["dataset"].get<std::string>(), r["der"].get<double>());
    } else if (r.contains("tag") && r.contains("val_metric")) {
      const std::string tag = r["tag"].get<std::string>();
      const double v = r["val_metric"].get<double>();
      auto it = best_val.find(tag);
      if (it == best_val.end()) {
        best_val[tag] = v;
        tags.push_back(tag);
      } else {
        it->second = std::min(it->second, v);
      }
    } else {
      throw FormatError("result row has neither {strategy, dataset, der} nor {tag, val_metric}: " + r.dump());
    }
  }
  for (const auto& tag : tags) t.Add(tag, "val", best_val[tag]);
  return t;
}

namespace {

std::string Pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::vector<std::vector<std::string>> Cells(const ResultTable& t) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Strategy"};
  header.insert(header.end(), t.datasets.begin(), t.datasets.end());
  header.push_back("Macro Avg.");
  rows.push_back(header);
  for (const auto& s : t.strategies) {
    std::vector<std::string> row{s};
    double sum = 0.0;
    int n = 0;
    for (const auto& d : t.datasets) {
      auto it = t.der.find({s, d});
      if (it == t.der.end()) {
        row.push_back("-");
      } else {
        row.push_back(Pct(it->second));
        sum += it->second;
        ++n;
      }
    }
    row.push_back(n > 0 ? Pct(sum / n) : "-");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string RenderTable(const ResultTable& table) {
  const auto rows = Cells(table);
  std::vector<size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (size_t c = 0; c < r.size(); ++c) {
      if (c > 0) out += " | ";
      const size_t pad = width[c] - r[c].size();
      out += c == 0 ? r[c] + std::string(pad, ' ') : std::string(pad, ' ') + r[c];
    }
    out += "\n";
  };
  line(rows.front());
  for (size_t c = 0; c < width.size(); ++c) {
    if (c > 0) out += "-+-";
    out += std::string(width[c], '-');
  }
  out += "\n";
  for (size_t i = 1; i < rows.size(); ++i) line(rows[i]);
  return out;
}

std::string RenderCsv(const ResultTable& table) {
  std::string out;
  for (const auto& r : Cells(table)) {
    for (size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + r[c];
    out += "\n";
  }
  return out;
}

}  // namespace sidpt
