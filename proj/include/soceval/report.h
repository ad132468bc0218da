// Copyright 2026 The SocEval Authors.
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

// Renders analysis documents into the report directory: domain comparison
// tables (CSV and Markdown), pairwise gap tables, heatmap data, extremes,
// triple-intersection variation, name groups, probe results, run metadata
// and a Markdown summary.
//
// Numeric columns come in two forms: the full-precision value and a
// "_display" column rounded to three decimals. Rendering is a pure function
// of its input.

#ifndef SOCEVAL_REPORT_H_
#define SOCEVAL_REPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "soceval/io.h"
#include "soceval/metrics.h"

namespace soceval {

struct ReportInput {
  // {"meta": {...}, "runs": [Analyze() documents]}.
  Json analysis;
  // Optional probe summaries (ProbeSummary::ToJson()).
  std::vector<Json> probes;
};

// File name to content.
using ReportFiles = std::map<std::string, std::string>;

// Analytic baseline scores rendered beneath the domain rows.
struct BaselineRow {
  std::string name;
  std::string els;
  std::string lmcs;
  std::string par;
};
const std::vector<BaselineRow>& BaselineRows();

// One domain table column block: a scorer's rows keyed by group.
struct DomainTableColumn {
  std::string scorer_id;
  std::vector<MetricRow> rows;
};

// Domain comparison table as CSV and Markdown. Rows: the four domains, the
// aggregated row and the neutral level in fixed order, followed by the
// baseline rows; each scorer contributes ELS, LMCS and PAR columns.
// MissingSection when no column has any row.
absl::StatusOr<std::pair<std::string, std::string>> EmitDomainTable(
    std::span<const DomainTableColumn> columns);

// One subgroup comparison; `gap` is PAR_a - PAR_b as computed by ParGap.
struct PairwiseRow {
  std::string scorer_id;
  std::string domain;
  std::string a;
  std::string b;
  double par_a = 0.0;
  double par_b = 0.0;
  double gap = 0.0;
};

// Pairwise CSV: scorer_id, domain, a, b, PAR_a, PAR_b, gap, gap_display and
// abs_gap_display.
std::string EmitPairwise(std::span<const PairwiseRow> rows);

absl::StatusOr<ReportFiles> RenderReport(const ReportInput& input);

// Renders and writes every file under `dir`, creating it if needed.
absl::Status WriteReport(const ReportInput& input, const std::filesystem::path& dir);

}  // namespace soceval

#endif  // SOCEVAL_REPORT_H_
