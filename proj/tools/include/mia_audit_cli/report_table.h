// Copyright 2026 The mia-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tabular CSV reports with columns benchmark,variant,metric,mean,std.

#ifndef MIA_AUDIT_CLI_REPORT_TABLE_H_
#define MIA_AUDIT_CLI_REPORT_TABLE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "mia_audit/metrics.h"

namespace mia_audit::cli {

// Written in place of a value that is not a number.
inline constexpr char kUndefinedCell[] = "NA";

struct ReportRow {
  std::string benchmark;
  std::string variant;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
};

class ReportTable {
 public:
  void Add(ReportRow row);
  // Adds mean and std of `stat`; undefined when no defined values remain.
  void AddAggregate(std::string benchmark, std::string variant,
                    std::string metric, const AggregateStat& stat);
  // Aggregates `values`, treating an empty list as undefined.
  void AddValues(std::string benchmark, std::string variant, std::string metric,
                 std::span<const double> values);

  const std::vector<ReportRow>& rows() const { return rows_; }
  // Mean of the first row with this variant and metric, or NaN.
  double Mean(std::string_view variant, std::string_view metric) const;

  std::string ToCsv() const;
  absl::Status WriteCsv(const std::string& path) const;

 private:
  std::vector<ReportRow> rows_;
};

// %.10g, or kUndefinedCell for NaN.
std::string FormatCell(double value);

}  // namespace mia_audit::cli

#endif  // MIA_AUDIT_CLI_REPORT_TABLE_H_
