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

#ifndef SIDPT_CLI_REPORT_H_
#define SIDPT_CLI_REPORT_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace sidpt {

// DER (fraction) per strategy and dataset.
struct ResultTable {
  std::vector<std::string> strategies;  // row order of first appearance
  std::vector<std::string> datasets;    // column order of first appearance
  std::map<std::pair<std::string, std::string>, double> der;

  void Add(const std::string& strategy, const std::string& dataset, double value);
};

// Rows carrying {strategy, dataset, der} are taken as is. Training metric
// logs ({tag, val_metric}) contribute their best (lowest) validation DER
// under the dataset name "val".
ResultTable CollectResults(const std::vector<nlohmann::json>& rows);

// Plain-text table in percent: one row per strategy, one column per
// dataset, and a macro average over the datasets present in that row.
std::string RenderTable(const ResultTable& table);
std::string RenderCsv(const ResultTable& table);

}  // namespace sidpt

#endif  // SIDPT_CLI_REPORT_H_
