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

#include "soceval/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "soceval/status.h"

namespace soceval {
namespace {

std::vector<const PromptMetric*> SortedByPrompt(
    std::span<const PromptMetric> metrics) {
  std::vector<const PromptMetric*> out;
  out.reserve(metrics.size());
  for (const PromptMetric& m : metrics) out.push_back(&m);
  std::sort(out.begin(), out.end(),
            [](const PromptMetric* a, const PromptMetric* b) {
              return a->prompt_id < b->prompt_id;
            });
  return out;
}

}  // namespace

absl::StatusOr<double> Lmcs(double relevant_mass, double irrelevant_mass) {
  if (relevant_mass < 0.0 || irrelevant_mass < 0.0) {
    return MakeError(ErrorKind::kZeroMass, "negative mass");
  }
  const double total = relevant_mass + irrelevant_mass;
  if (!(total > 0.0)) {
    return MakeError(ErrorKind::kZeroMass, "relevant and irrelevant mass are zero");
  }
  return relevant_mass / total;
}

absl::StatusOr<double> Par(double poor_mass, double rich_mass) {
  if (poor_mass < 0.0 || rich_mass < 0.0) {
    return MakeError(ErrorKind::kZeroMass, "negative mass");
  }
  const double total = poor_mass + rich_mass;
  if (!(total > 0.0)) {
    return MakeError(ErrorKind::kZeroMass, "poor and rich mass are zero");
  }
  return poor_mass / total;
}

double Els(double lmcs, double par, bool els_normalizer) {
  const double balance = std::min(par, 1.0 - par);
  return els_normalizer ? lmcs * balance / 0.5 : lmcs * balance;
}

absl::StatusOr<ChoiceMass> PerPromptMasses(std::span<const ChoiceScore> scores,
                                           std::span<const FillWord> fills) {
  std::map<absl::string_view, const ChoiceScore*> by_fill;
  for (const ChoiceScore& s : scores) by_fill.emplace(s.fill_id, &s);
  ChoiceMass mass;
  std::vector<std::string> missing;
  for (const FillWord& fill : fills) {
    const auto it = by_fill.find(fill.id);
    if (it == by_fill.end()) {
      missing.push_back(fill.id);
      continue;
    }
    const double m = std::exp(it->second->logprob);
    switch (fill.fill_class) {
      case FillClass::kPoor:
        mass.poor += m;
        break;
      case FillClass::kRich:
        mass.rich += m;
        break;
      case FillClass::kIrrelevant:
        mass.irrelevant += m;
        break;
    }
  }
  if (!missing.empty()) {
    const std::string prompt = scores.empty() ? "" : scores.front().prompt_id;
    return MakeError(ErrorKind::kIncompleteScores,
                     absl::StrCat("prompt ", prompt, " missing fills: ",
                                  absl::StrJoin(missing, ", ")));
  }
  return mass;
}

absl::string_view PolicyName(Policy policy) {
  return policy == Policy::kMacro ? "macro" : "micro";
}

absl::StatusOr<Policy> ParsePolicy(absl::string_view name) {
  if (name == "macro") return Policy::kMacro;
  if (name == "micro") return Policy::kMicro;
  return MakeError(ErrorKind::kInvalidConfig,
                   absl::StrCat("unknown aggregation policy '", name, "'"));
}

absl::StatusOr<PromptMetric> ComputePromptMetric(
    const Prompt& prompt, std::span<const ChoiceScore> scores,
    std::span<const FillWord> fills, bool els_normalizer) {
  if (scores.empty()) {
    return MakeError(ErrorKind::kIncompleteScores,
                     absl::StrCat("prompt ", prompt.prompt_id, " has no scores"));
  }
  SOCEVAL_ASSIGN_OR_RETURN(ChoiceMass mass, PerPromptMasses(scores, fills));
  if (scores.front().mode == ScoringMode::kMasked) {
    const double total = mass.total();
    if (!(total > 0.0)) {
      return MakeError(ErrorKind::kZeroMass,
                       absl::StrCat("prompt ", prompt.prompt_id));
    }
    mass.poor /= total;
    mass.rich /= total;
    mass.irrelevant /= total;
  }
  PromptMetric m;
  m.prompt_id = prompt.prompt_id;
  m.term_id = prompt.term_id;
  m.domain = prompt.domain;
  m.subgroups = prompt.subgroups;
  m.mass = mass;
  SOCEVAL_ASSIGN_OR_RETURN(m.lmcs, Lmcs(mass.relevant(), mass.irrelevant));
  SOCEVAL_ASSIGN_OR_RETURN(m.par, Par(mass.poor, mass.rich));
  m.els = Els(m.lmcs, m.par, els_normalizer);
  return m;
}

absl::StatusOr<std::vector<PromptMetric>> ComputePromptMetrics(
    std::span<const Prompt> prompts, std::span<const ChoiceScore> scores,
    std::span<const FillWord> fills, bool els_normalizer) {
  std::map<absl::string_view, std::span<const ChoiceScore>> by_prompt;
  for (size_t i = 0; i < scores.size();) {
    size_t j = i;
    while (j < scores.size() && scores[j].prompt_id == scores[i].prompt_id) ++j;
    by_prompt[scores[i].prompt_id] = scores.subspan(i, j - i);
    i = j;
  }
  std::vector<PromptMetric> out;
  out.reserve(prompts.size());
  for (const Prompt& prompt : prompts) {
    const auto it = by_prompt.find(prompt.prompt_id);
    if (it == by_prompt.end()) {
      return MakeError(ErrorKind::kIncompleteScores,
                       absl::StrCat("prompt ", prompt.prompt_id, " (", prompt.term_id,
                                    ") has no scores"));
    }
    SOCEVAL_ASSIGN_OR_RETURN(
        PromptMetric m, ComputePromptMetric(prompt, it->second, fills, els_normalizer));
    out.push_back(std::move(m));
  }
  return out;
}

Json MetricRow::ToJson() const {
  return Json{{"group", group},
              {"n", n},
              {"lmcs", lmcs},
              {"par", par},
              {"els", els},
              {"policy", PolicyName(policy)},
              {"els_normalizer", els_normalizer},
              {"pooled",
               {{"poor", pooled.poor},
                {"rich", pooled.rich},
                {"irrelevant", pooled.irrelevant}}}};
}

absl::StatusOr<MetricRow> MetricRow::FromJson(const Json& json) {
  try {
    MetricRow row;
    row.group = json.at("group").get<std::string>();
    row.n = json.at("n").get<size_t>();
    row.lmcs = json.at("lmcs").get<double>();
    row.par = json.at("par").get<double>();
    row.els = json.at("els").get<double>();
    SOCEVAL_ASSIGN_OR_RETURN(row.policy,
                             ParsePolicy(json.at("policy").get<std::string>()));
    row.els_normalizer = json.at("els_normalizer").get<bool>();
    if (json.contains("pooled")) {
      const Json& p = json.at("pooled");
      row.pooled = {p.at("poor").get<double>(), p.at("rich").get<double>(),
                    p.at("irrelevant").get<double>()};
    }
    return row;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat("metric row: ", e.what()));
  }
}

absl::StatusOr<MetricRow> AggregateGroup(std::span<const PromptMetric> metrics,
                                         absl::string_view group,
                                         const MetricOptions& options) {
  if (metrics.empty()) {
    return MakeError(ErrorKind::kEmptyGroup,
                     absl::StrCat("group '", group, "' has no prompts"));
  }
  MetricRow row;
  row.group = std::string(group);
  row.n = metrics.size();
  row.policy = options.policy;
  row.els_normalizer = options.els_normalizer;
  double lmcs_sum = 0.0, par_sum = 0.0, els_sum = 0.0;
  for (const PromptMetric* m : SortedByPrompt(metrics)) {
    row.pooled.poor += m->mass.poor;
    row.pooled.rich += m->mass.rich;
    row.pooled.irrelevant += m->mass.irrelevant;
    lmcs_sum += m->lmcs;
    par_sum += m->par;
    els_sum += Els(m->lmcs, m->par, options.els_normalizer);
  }
  if (options.policy == Policy::kMacro) {
    const double n = static_cast<double>(row.n);
    row.lmcs = lmcs_sum / n;
    row.par = par_sum / n;
    row.els = els_sum / n;
  } else {
    SOCEVAL_ASSIGN_OR_RETURN(row.lmcs,
                             Lmcs(row.pooled.relevant(), row.pooled.irrelevant));
    SOCEVAL_ASSIGN_OR_RETURN(row.par, Par(row.pooled.poor, row.pooled.rich));
    row.els = Els(row.lmcs, row.par, options.els_normalizer);
  }
  return row;
}

absl::StatusOr<std::vector<MetricRow>> Aggregate(
    std::span<const PromptMetric> metrics, const GroupFn& group_by,
    const MetricOptions& options) {
  if (metrics.empty()) {
    return MakeError(ErrorKind::kEmptyGroup, "no prompts to aggregate");
  }
  std::map<std::string, std::vector<PromptMetric>> groups;
  for (const PromptMetric& m : metrics) {
    for (std::string& key : group_by(m)) groups[std::move(key)].push_back(m);
  }
  std::vector<MetricRow> rows;
  for (const auto& [key, members] : groups) {
    SOCEVAL_ASSIGN_OR_RETURN(MetricRow row, AggregateGroup(members, key, options));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> ByTerm(const PromptMetric& m) { return {m.term_id}; }

std::vector<std::string> ByDomain(const PromptMetric& m) { return {m.domain}; }

std::vector<std::string> BySubgroup(const PromptMetric& m) {
  std::set<std::string> unique(m.subgroups.begin(), m.subgroups.end());
  return {unique.begin(), unique.end()};
}

absl::StatusOr<MetricRow> NeutralLevel(std::span<const PromptMetric> metrics,
                                       const Lexicon& lexicon,
                                       const MetricOptions& options) {
  const std::string neutral(DomainName(Domain::kNeutral));
  std::vector<PromptMetric> members;
  std::set<absl::string_view> seen;
  for (const PromptMetric& m : metrics) {
    if (m.domain != neutral) continue;
    members.push_back(m);
  }
  for (const PromptMetric& m : members) seen.insert(m.term_id);
  std::vector<std::string> missing;
  for (const Term* term : lexicon.TermsIn(Domain::kNeutral)) {
    if (!seen.contains(term->id)) missing.push_back(term->id);
  }
  if (!missing.empty()) {
    return MakeError(ErrorKind::kIncompleteScores,
                     absl::StrCat("neutral terms without scores: ",
                                  absl::StrJoin(missing, ", ")));
  }
  return AggregateGroup(members, neutral, options);
}

absl::StatusOr<double> ParGap(const MetricRow& a, const MetricRow& b) {
  if (a.policy != b.policy) {
    return MakeError(ErrorKind::kPolicyMismatch,
                     absl::StrCat(a.group, " is ", PolicyName(a.policy), ", ",
                                  b.group, " is ", PolicyName(b.policy)));
  }
  return a.par - b.par;
}

absl::StatusOr<double> ParVariation(const MetricRow& composite,
                                    const MetricRow& component) {
  return ParGap(composite, component);
}

std::string MetricRowsCsv(std::span<const MetricRow> rows) {
  std::string out = "group,n,LMCS,PAR,ELS,policy,els_normalizer\n";
  for (const MetricRow& r : rows) {
    absl::StrAppend(&out, r.group, ",", r.n, ",", FormatDouble(r.lmcs), ",",
                    FormatDouble(r.par), ",", FormatDouble(r.els), ",",
                    PolicyName(r.policy), ",",
                    r.els_normalizer ? "true" : "false", "\n");
  }
  return out;
}

}  // namespace soceval
