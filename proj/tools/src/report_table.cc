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

#include "mia_audit_cli/report_table.h"

#include <cmath>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "mia_audit/undefined.h"

namespace mia_audit::cli {
namespace {

// Quotes a field when it holds a delimiter or quote.
std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string FormatCell(double value) {
  if (std::isnan(value)) return kUndefinedCell;
  // Avoid printing "-0".
  if (value == 0.0) value = 0.0;
  return absl::StrFormat("%.10g", value);
}

void ReportTable::Add(ReportRow row) { rows_.push_back(std::move(row)); }

void ReportTable::AddAggregate(std::string benchmark, std::string variant,
                               std::string metric, const AggregateStat& stat) {
  ReportRow row{std::move(benchmark), std::move(variant), std::move(metric),
                stat.mean, stat.std};
  if (stat.n == 0) row.mean = row.std = kUndefined;
  Add(std::move(row));
}

void ReportTable::AddValues(std::string benchmark, std::string variant,
                            std::string metric,
                            std::span<const double> values) {
  AggregateStat stat;
  if (!values.empty()) {
    absl::StatusOr<AggregateStat> aggregated = Aggregate(values);
    if (aggregated.ok()) stat = *aggregated;
  }
  AddAggregate(std::move(benchmark), std::move(variant), std::move(metric),
               stat);
}

double ReportTable::Mean(std::string_view variant,
                         std::string_view metric) const {
  for (const ReportRow& row : rows_) {
    if (row.variant == variant && row.metric == metric) return row.mean;
  }
  return kUndefined;
}

std::string ReportTable::ToCsv() const {
  std::string out = "benchmark,variant,metric,mean,std\n";
  for (const ReportRow& row : rows_) {
    absl::StrAppend(&out, CsvField(row.benchmark), ",", CsvField(row.variant),
                    ",", CsvField(row.metric), ",", FormatCell(row.mean), ",",
                    FormatCell(row.std), "\n");
  }
  return out;
}

absl::Status ReportTable::WriteCsv(const std::string& path) const {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(absl::StrCat("cannot open ", path));
  }
  file << ToCsv();
  file.close();
  if (!file) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

}  // namespace mia_audit::cli
