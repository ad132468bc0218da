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

#include "soceval/report.h"

#include <cmath>
#include <system_error>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "soceval/status.h"

namespace soceval {
namespace {

struct DomainRowLabel {
  absl::string_view group;
  absl::string_view label;
};

constexpr DomainRowLabel kDomainRowOrder[] = {
    {"gender", "Gender"},         {"marital", "Marital status"},
    {"race", "Race"},             {"religion", "Religion"},
    {"aggregated", "Aggregated"}, {"neutral", "Neutral level"},
};

// Scorer ids become file name components.
std::string SafeName(absl::string_view id) {
  std::string out(id);
  for (char& c : out) {
    if (!absl::ascii_isalnum(static_cast<unsigned char>(c)) && c != '-' &&
        c != '_' && c != '.') {
      c = '_';
    }
  }
  return out;
}

// Quotes a CSV field when needed.
std::string CsvField(absl::string_view value) {
  if (value.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> DisplayAll(const std::vector<double>& values) {
  std::vector<std::string> out;
  for (double v : values) out.push_back(FormatDisplay(v));
  return out;
}

absl::StatusOr<std::vector<MetricRow>> RowsFromJson(const Json& json) {
  std::vector<MetricRow> rows;
  if (!json.is_array()) return rows;
  for (const Json& r : json) {
    SOCEVAL_ASSIGN_OR_RETURN(MetricRow row, MetricRow::FromJson(r));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string MarkdownTable(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::string out = absl::StrCat("| ", absl::StrJoin(header, " | "), " |\n|");
  for (size_t i = 0; i < header.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : rows) {
    absl::StrAppend(&out, "| ", absl::StrJoin(row, " | "), " |\n");
  }
  return out;
}

}  // namespace

const std::vector<BaselineRow>& BaselineRows() {
  static const auto* rows = new std::vector<BaselineRow>{
      {"IdealLM", FormatDisplay(1.0), FormatDisplay(1.0), FormatDisplay(0.5)},
      {"FullBiasLM", FormatDisplay(0.0), FormatDisplay(1.0), "0 or 1"},
      {"RandomLM", FormatDisplay(0.5), FormatDisplay(0.5), FormatDisplay(0.5)},
  };
  return *rows;
}

absl::StatusOr<std::pair<std::string, std::string>> EmitDomainTable(
    std::span<const DomainTableColumn> columns) {
  std::vector<std::string> header = {"row"};
  std::vector<std::string> md_header = {"Domain"};
  bool any = false;
  for (const DomainTableColumn& c : columns) {
    for (absl::string_view metric : {"ELS", "LMCS", "PAR"}) {
      header.push_back(absl::StrCat(c.scorer_id, "_", metric));
      md_header.push_back(absl::StrCat(c.scorer_id, " ", metric));
    }
    any = any || !c.rows.empty();
  }
  if (!any) return MakeError(ErrorKind::kMissingSection, "domain_table has no rows");

  std::vector<std::vector<std::string>> table;
  for (const DomainRowLabel& label : kDomainRowOrder) {
    std::vector<std::string> cells = {std::string(label.label)};
    bool present = false;
    for (const DomainTableColumn& c : columns) {
      const MetricRow* found = nullptr;
      for (const MetricRow& r : c.rows) {
        if (r.group == label.group) found = &r;
      }
      if (found == nullptr) {
        cells.insert(cells.end(), {"", "", ""});
        continue;
      }
      present = true;
      cells.push_back(FormatDisplay(found->els));
      cells.push_back(FormatDisplay(found->lmcs));
      cells.push_back(FormatDisplay(found->par));
    }
    if (present) table.push_back(std::move(cells));
  }
  for (const BaselineRow& b : BaselineRows()) {
    std::vector<std::string> cells = {b.name};
    for (size_t i = 0; i < columns.size(); ++i) {
      cells.insert(cells.end(), {b.els, b.lmcs, b.par});
    }
    table.push_back(std::move(cells));
  }

  std::string csv = absl::StrCat(absl::StrJoin(header, ","), "\n");
  for (const auto& row : table) {
    std::vector<std::string> fields;
    for (const std::string& f : row) fields.push_back(CsvField(f));
    absl::StrAppend(&csv, absl::StrJoin(fields, ","), "\n");
  }
  return std::make_pair(std::move(csv), MarkdownTable(md_header, table));
}

std::string EmitPairwise(std::span<const PairwiseRow> rows) {
  std::string out =
      "scorer_id,domain,a,b,PAR_a,PAR_b,gap,gap_display,abs_gap_display\n";
  for (const PairwiseRow& r : rows) {
    absl::StrAppend(&out, CsvField(r.scorer_id), ",", CsvField(r.domain), ",",
                    CsvField(r.a), ",", CsvField(r.b), ",", FormatDouble(r.par_a),
                    ",", FormatDouble(r.par_b), ",", FormatDouble(r.gap), ",",
                    FormatDisplay(r.gap), ",", FormatDisplay(std::fabs(r.gap)), "\n");
  }
  return out;
}

absl::StatusOr<ReportFiles> RenderReport(const ReportInput& input) {
  const Json& analysis = input.analysis;
  if (!analysis.is_object() || !analysis.contains("runs") ||
      !analysis["runs"].is_array() || analysis["runs"].empty()) {
    return MakeError(ErrorKind::kMissingSection, "analysis has no runs");
  }
  const Json& runs = analysis["runs"];
  const bool multi = runs.size() > 1;
  ReportFiles files;

  try {
    std::vector<DomainTableColumn> columns;
    std::map<std::string, std::vector<PairwiseRow>> pairwise;
    std::string extremes =
        "scorer_id,scope,kind,group,PAR,PAR_display,neutral,ties\n";
    std::string triples =
        "scorer_id,term_id,PAR,PAR_Var_MS,PAR_Var_R,PAR_Var_G,PAR_display,"
        "PAR_Var_MS_display,PAR_Var_R_display,PAR_Var_G_display\n";
    std::string names = "scorer_id,source,cell,n,PAR,PAR_display\n";
    bool has_triples = false, has_names = false;
    std::string summary = "# SocEval report\n\n";
    Json scorers = Json::array();

    for (const Json& run : runs) {
      const std::string scorer_id = run.at("scorer_id").get<std::string>();
      const std::string suffix = multi ? absl::StrCat("_", SafeName(scorer_id)) : "";
      for (const char* section : {"domain_rows", "term_rows", "heatmaps"}) {
        if (!run.contains(section)) {
          return MakeError(ErrorKind::kMissingSection,
                           absl::StrCat(scorer_id, ": ", section));
        }
      }
      scorers.push_back({{"scorer_id", scorer_id},
                         {"model_id", run.value("model_id", "")},
                         {"policy", run.value("policy", "")},
                         {"els_normalizer", run.value("els_normalizer", true)},
                         {"n_prompts", run.value("n_prompts", 0)},
                         {"skipped", run.value("skipped", Json::array())}});

      SOCEVAL_ASSIGN_OR_RETURN(std::vector<MetricRow> domain_rows,
                               RowsFromJson(run.at("domain_rows")));
      SOCEVAL_ASSIGN_OR_RETURN(std::vector<MetricRow> term_rows,
                               RowsFromJson(run.at("term_rows")));
      std::vector<MetricRow> all_rows = domain_rows;
      if (run.contains("subgroup_rows")) {
        for (const auto& [domain, rows_json] : run["subgroup_rows"].items()) {
          SOCEVAL_ASSIGN_OR_RETURN(std::vector<MetricRow> rows, RowsFromJson(rows_json));
          for (MetricRow& r : rows) {
            r.group = absl::StrCat(domain, ":", r.group);
            all_rows.push_back(std::move(r));
          }
        }
      }
      all_rows.insert(all_rows.end(), term_rows.begin(), term_rows.end());
      files[absl::StrCat("metrics", suffix, ".csv")] = MetricRowsCsv(all_rows);
      columns.push_back({scorer_id, domain_rows});

      for (const Json& p : run.value("pairwise", Json::array())) {
        const std::string domain = p.at("domain").get<std::string>();
        pairwise[domain].push_back({scorer_id, domain, p.at("a").get<std::string>(),
                                    p.at("b").get<std::string>(),
                                    p.at("par_a").get<double>(),
                                    p.at("par_b").get<double>(),
                                    p.at("gap").get<double>()});
      }

      for (const Json& h : run.at("heatmaps")) {
        Json out = h;
        out["scorer_id"] = scorer_id;
        std::vector<std::vector<std::string>> display;
        for (const Json& row : h.at("cells")) {
          display.push_back(DisplayAll(row.get<std::vector<double>>()));
        }
        out["cells_display"] = display;
        out["row_margins_display"] =
            DisplayAll(h.at("row_margins").get<std::vector<double>>());
        out["col_margins_display"] =
            DisplayAll(h.at("col_margins").get<std::vector<double>>());
        files[absl::StrCat("heatmap", suffix, "_", h.at("name").get<std::string>(),
                           ".json")] = out.dump(2) + "\n";
      }

      absl::StrAppend(&summary, "## ", scorer_id, "\n\n");
      absl::StrAppend(&summary, "Model: ", run.value("model_id", ""),
                      ". Aggregation: ", run.value("policy", ""),
                      ". ELS normalizer: ",
                      run.value("els_normalizer", true) ? "on" : "off",
                      ". Prompts: ", run.value("n_prompts", 0), ".\n\n");
      const Json& neutral = run.value("neutral_level", Json(nullptr));
      if (!neutral.is_null()) {
        absl::StrAppend(&summary, "Neutral level (PAR): ",
                        FormatDisplay(neutral.at("par").get<double>()), "\n\n");
      }

      std::vector<std::vector<std::string>> extreme_md;
      for (const Json& e : run.value("extremes", Json::array())) {
        const std::string scope = e.at("scope").get<std::string>();
        for (const char* kind : {"highest", "lowest", "nearest_neutral"}) {
          const Json& x = e.at(kind);
          const double par = x.at("par").get<double>();
          absl::StrAppend(
              &extremes, CsvField(scorer_id), ",", CsvField(scope), ",", kind, ",",
              CsvField(x.at("group").get<std::string>()), ",", FormatDouble(par), ",",
              FormatDisplay(par), ",", FormatDouble(e.at("neutral").get<double>()), ",",
              CsvField(absl::StrJoin(x.at("ties").get<std::vector<std::string>>(), ";")),
              "\n");
        }
        extreme_md.push_back(
            {scope, e["highest"]["group"].get<std::string>(),
             FormatDisplay(e["highest"]["par"].get<double>()),
             e["lowest"]["group"].get<std::string>(),
             FormatDisplay(e["lowest"]["par"].get<double>())});
      }
      if (!extreme_md.empty()) {
        absl::StrAppend(&summary, "### Extremes\n\n",
                        MarkdownTable({"Scope", "Highest", "PAR", "Lowest", "PAR"},
                                      extreme_md),
                        "\n");
      }

      for (const Json& t : run.value("triple_variation", Json::array())) {
        has_triples = true;
        const double values[] = {t.at("par").get<double>(),
                                 t.at("var_marital").get<double>(),
                                 t.at("var_race").get<double>(),
                                 t.at("var_gender").get<double>()};
        absl::StrAppend(&triples, CsvField(scorer_id), ",",
                        CsvField(t.at("term_id").get<std::string>()));
        for (double v : values) absl::StrAppend(&triples, ",", FormatDouble(v));
        for (double v : values) absl::StrAppend(&triples, ",", FormatDisplay(v));
        triples += "\n";
      }

      const Json& name_groups = run.value("names", Json(nullptr));
      if (!name_groups.is_null()) {
        has_names = true;
        std::vector<std::vector<std::string>> name_md;
        for (const char* source : {"names", "composites"}) {
          SOCEVAL_ASSIGN_OR_RETURN(std::vector<MetricRow> rows,
                                   RowsFromJson(name_groups.at(source)));
          for (const MetricRow& r : rows) {
            absl::StrAppend(&names, CsvField(scorer_id), ",", source, ",", r.group,
                            ",", r.n, ",", FormatDouble(r.par), ",",
                            FormatDisplay(r.par), "\n");
            name_md.push_back({source, r.group, FormatDisplay(r.par)});
          }
        }
        absl::StrAppend(&summary, "### Name groups\n\n",
                        MarkdownTable({"Source", "Cell", "PAR"}, name_md), "\n");
      }

      const Json& reasoning = run.value("reasoning_prompts", Json::array());
      if (!reasoning.empty()) {
        absl::StrAppend(&summary, "### Reasoning probe prompts\n\n");
        for (const Json& p : reasoning) {
          absl::StrAppend(&summary, "- ", p.at("domain").get<std::string>(), ": \"",
                          p.at("prompt").get<std::string>(), "\"\n");
        }
        summary += "\n";
      }
      const Json& skipped = run.value("skipped", Json::array());
      if (!skipped.empty()) {
        absl::StrAppend(&summary, "### Skipped sections\n\n");
        for (const Json& s : skipped) {
          absl::StrAppend(&summary, "- ", s.at("section").get<std::string>(), ": ",
                          s.at("reason").get<std::string>(), "\n");
        }
        summary += "\n";
      }
    }

    SOCEVAL_ASSIGN_OR_RETURN(auto domain_table, EmitDomainTable(columns));
    files["domain_table.csv"] = std::move(domain_table.first);
    files["domain_table.md"] = domain_table.second;
    summary = absl::StrCat(summary.substr(0, summary.find("## ")),
                           "## Domain comparison\n\n", domain_table.second, "\n",
                           summary.substr(summary.find("## ")));

    for (const auto& [domain, rows] : pairwise) {
      files[absl::StrCat("pairwise_", SafeName(domain), ".csv")] = EmitPairwise(rows);
    }
    files["extremes.csv"] = extremes;
    if (has_triples) files["triple_variation.csv"] = triples;
    if (has_names) files["names.csv"] = names;

    if (!input.probes.empty()) {
      std::string probe =
          "attribute,model_id,name,truth,predicted,correct,tie,score_0,score_1\n";
      absl::StrAppend(&summary, "## Name attribute probe\n\n");
      for (const Json& p : input.probes) {
        const std::string attribute = p.at("attribute").get<std::string>();
        const std::string model = p.at("model_id").get<std::string>();
        absl::StrAppend(&summary, "- ", attribute, " accuracy (", model, "): ",
                        FormatDisplay(p.at("accuracy").get<double>()), " over ",
                        p.at("n").get<size_t>(), " names\n");
        for (const Json& r : p.at("results")) {
          const auto scores = r.at("scores").get<std::vector<double>>();
          absl::StrAppend(&probe, attribute, ",", CsvField(model), ",",
                          CsvField(r.at("name").get<std::string>()), ",",
                          r.at("truth").get<std::string>(), ",",
                          r.at("predicted").get<std::string>(), ",",
                          r.at("correct").get<bool>() ? "true" : "false", ",",
                          r.at("tie").get<bool>() ? "true" : "false");
          for (double s : scores) absl::StrAppend(&probe, ",", FormatDouble(s));
          probe += "\n";
        }
      }
      summary +=
          "\nProbe predictions use constrained-choice scoring of a probe "
          "sentence rather than free generation.\n";
      files["probe.csv"] = std::move(probe);
    }

    Json meta = analysis.value("meta", Json::object());
    meta["scorers"] = std::move(scorers);
    if (!input.probes.empty()) meta["probe_method"] = "constrained_choice";
    meta["files"] = Json::array();
    for (const auto& [name, content] : files) meta["files"].push_back(name);
    meta["files"].push_back("meta.json");
    meta["files"].push_back("summary.md");
    files["meta.json"] = meta.dump(2) + "\n";
    files["summary.md"] = std::move(summary);
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMissingSection,
                     absl::StrCat("malformed analysis: ", e.what()));
  }
  return files;
}

absl::Status WriteReport(const ReportInput& input, const std::filesystem::path& dir) {
  SOCEVAL_ASSIGN_OR_RETURN(const ReportFiles files, RenderReport(input));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorKind::kIo,
                     absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  for (const auto& [name, content] : files) {
    SOCEVAL_RETURN_IF_ERROR(WriteFile(dir / name, content));
  }
  return absl::OkStatus();
}

}  // namespace soceval
