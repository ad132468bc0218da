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

#include "soceval/lexicon.h"

#include <array>
#include <map>
#include <set>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "soceval/status.h"

namespace soceval {
namespace {

constexpr std::array<std::pair<Domain, absl::string_view>, 8> kDomainNames = {{
    {Domain::kGender, "gender"},
    {Domain::kMarital, "marital"},
    {Domain::kRace, "race"},
    {Domain::kReligion, "religion"},
    {Domain::kNeutral, "neutral"},
    {Domain::kName, "name"},
    {Domain::kSocioeconomic, "socioeconomic"},
    {Domain::kComposite, "composite"},
}};

constexpr std::array<Domain, 6> kTermFileDomains = {
    Domain::kGender,  Domain::kMarital, Domain::kRace,
    Domain::kReligion, Domain::kNeutral, Domain::kSocioeconomic};

constexpr absl::string_view kPossessivePrefix = "your ";
constexpr absl::string_view kHeadNoun = " people";

absl::StatusOr<std::string> RequireString(const Json& json,
                                          absl::string_view field,
                                          absl::string_view where) {
  const auto it = json.find(field);
  if (it == json.end() || !it->is_string()) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(where, ": missing string field '", field, "'"));
  }
  return it->get<std::string>();
}

bool OptionalBool(const Json& json, absl::string_view field) {
  const auto it = json.find(field);
  return it != json.end() && it->is_boolean() && it->get<bool>();
}

// "White people" -> "White".
absl::StatusOr<std::string> AttributeAdjective(const Term& term) {
  if (!absl::EndsWith(term.surface_plural, kHeadNoun)) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(term.id, ": attribute term '",
                                  term.surface_plural,
                                  "' does not end in the head noun 'people'"));
  }
  return term.surface_plural.substr(
      0, term.surface_plural.size() - kHeadNoun.size());
}

// Prefixes `adjectives` to a gender surface, keeping "your" in front.
std::string ComposeSurface(const std::vector<std::string>& adjectives,
                           absl::string_view head, bool possessive) {
  std::string out;
  if (possessive && absl::StartsWith(head, kPossessivePrefix)) {
    out = std::string(kPossessivePrefix);
    head.remove_prefix(kPossessivePrefix.size());
  }
  absl::StrAppend(&out, absl::StrJoin(adjectives, " "), " ", head);
  return out;
}

}  // namespace

absl::string_view DomainName(Domain domain) {
  for (const auto& [d, name] : kDomainNames) {
    if (d == domain) return name;
  }
  return "unknown";
}

absl::StatusOr<Domain> ParseDomain(absl::string_view name) {
  for (const auto& [d, n] : kDomainNames) {
    if (n == name) return d;
  }
  return MakeError(ErrorKind::kMalformedFile,
                   absl::StrCat("unknown domain '", name, "'"));
}

std::string Term::subgroup() const { return absl::StrJoin(subgroups, "+"); }

std::string Term::DomainKey() const {
  if (!is_composite()) return std::string(DomainName(domain));
  return absl::StrJoin(composition, "+", [](std::string* out, Domain d) {
    absl::StrAppend(out, DomainName(d));
  });
}

Json Term::ToJson() const {
  Json json = {{"id", id},
               {"surface_plural", surface_plural},
               {"surface_singular", surface_singular},
               {"domain", DomainName(domain)},
               {"subgroup", subgroup()},
               {"possessive", possessive},
               {"curated", curated}};
  if (is_composite()) {
    Json comp = Json::array();
    for (Domain d : composition) comp.push_back(DomainName(d));
    json["composition"] = comp;
    json["components"] = components;
  }
  return json;
}

absl::StatusOr<Term> Term::FromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kMalformedFile, "term record is not an object");
  }
  Term term;
  SOCEVAL_ASSIGN_OR_RETURN(term.id, RequireString(json, "id", "term"));
  SOCEVAL_ASSIGN_OR_RETURN(term.surface_plural,
                           RequireString(json, "surface_plural", term.id));
  if (const auto it = json.find("surface_singular");
      it != json.end() && it->is_string()) {
    term.surface_singular = it->get<std::string>();
  }
  SOCEVAL_ASSIGN_OR_RETURN(const std::string domain,
                           RequireString(json, "domain", term.id));
  SOCEVAL_ASSIGN_OR_RETURN(term.domain, ParseDomain(domain));
  SOCEVAL_ASSIGN_OR_RETURN(const std::string subgroup,
                           RequireString(json, "subgroup", term.id));
  term.subgroups = {subgroup};
  term.possessive = OptionalBool(json, "possessive");
  term.curated = OptionalBool(json, "curated");
  if (term.surface_plural.empty()) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(term.id, ": empty surface_plural"));
  }
  return term;
}

absl::string_view GenderLabelName(GenderLabel label) {
  return label == GenderLabel::kFemale ? "female" : "male";
}

absl::string_view RaceLabelName(RaceLabel label) {
  return label == RaceLabel::kWhite ? "white" : "non_white";
}

std::string NameEntry::Cell() const {
  return absl::StrCat(RaceLabelName(race), "_", GenderLabelName(gender));
}

Term NameEntry::AsTerm() const {
  Term term;
  std::string slug;
  for (char c : name) {
    slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  term.id = absl::StrCat("name.", slug);
  term.surface_plural = name;
  term.surface_singular = name;
  term.domain = Domain::kName;
  term.subgroups = {std::string(GenderLabelName(gender)),
                    std::string(RaceLabelName(race))};
  term.curated = curated;
  return term;
}

Lexicon::Lexicon(std::vector<Term> terms, std::vector<NameEntry> names)
    : terms_(std::move(terms)), names_(std::move(names)) {
  for (size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].id, i);
}

std::vector<const Term*> Lexicon::TermsIn(Domain domain) const {
  std::vector<const Term*> out;
  for (const Term& term : terms_) {
    if (term.domain == domain) out.push_back(&term);
  }
  return out;
}

const Term* Lexicon::Find(absl::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &terms_[it->second];
}

Json Lexicon::Manifest() const {
  Json domains = Json::object();
  size_t demographic_and_neutral = 0;
  for (Domain d : {Domain::kGender, Domain::kMarital, Domain::kRace,
                   Domain::kReligion, Domain::kNeutral}) {
    const size_t n = TermsIn(d).size();
    domains[std::string(DomainName(d))] = n;
    demographic_and_neutral += n;
  }
  Json fills = {{"poor", 0}, {"rich", 0}};
  for (const Term* t : TermsIn(Domain::kSocioeconomic)) {
    fills[t->subgroup()] = fills[t->subgroup()].get<int>() + 1;
  }
  Json composites = Json::object();
  size_t composite_total = 0;
  for (const auto& rule : PermittedCompositions()) {
    std::string key = absl::StrJoin(rule, "+", [](std::string* out, Domain d) {
      absl::StrAppend(out, DomainName(d));
    });
    size_t n = 1;
    for (Domain d : rule) n *= TermsIn(d).size();
    composites[key] = n;
    composite_total += n;
  }
  composites["total"] = composite_total;
  std::map<std::string, int> cells;
  for (const NameEntry& entry : names_) ++cells[entry.Cell()];
  Json name_json = {{"total", names_.size()}, {"cells", cells}};
  return Json{
      {"domains", domains},
      {"demographic_and_neutral_total", demographic_and_neutral},
      {"composites", composites},
      {"names", name_json},
      {"socioeconomic", fills},
      {"target_terms_total",
       demographic_and_neutral + composite_total + names_.size()},
  };
}

absl::StatusOr<Lexicon> LoadLexicon(const std::filesystem::path& dir) {
  std::vector<Term> terms;
  std::set<std::string> ids;
  for (Domain domain : kTermFileDomains) {
    const auto path = dir / absl::StrCat(DomainName(domain), ".jsonl");
    if (!std::filesystem::is_regular_file(path)) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat(path.string(), ": missing term file"));
    }
    size_t count = 0;
    SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
        path, [&](size_t line, const Json& json) -> absl::Status {
          const std::string where = absl::StrCat(path.string(), ":", line);
          auto term = Term::FromJson(json);
          if (!term.ok()) {
            return MakeError(ErrorKind::kMalformedFile,
                             absl::StrCat(where, ": ", term.status().message()));
          }
          if (term->domain != domain) {
            return MakeError(
                ErrorKind::kMalformedFile,
                absl::StrCat(where, ": term ", term->id, " has domain '",
                             DomainName(term->domain), "'"));
          }
          if (domain == Domain::kSocioeconomic) {
            if (term->subgroup() != "poor" && term->subgroup() != "rich") {
              return MakeError(
                  ErrorKind::kMalformedFile,
                  absl::StrCat(where, ": socioeconomic term ", term->id,
                               " must have subgroup poor or rich"));
            }
          } else if (term->surface_singular.empty()) {
            return MakeError(ErrorKind::kMissingSingularForm,
                             absl::StrCat(where, ": ", term->id));
          }
          if (!ids.insert(term->id).second) {
            return MakeError(ErrorKind::kDuplicateTerm,
                             absl::StrCat(where, ": ", term->id));
          }
          terms.push_back(*std::move(term));
          ++count;
          return absl::OkStatus();
        }));
    if (count == 0) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat(path.string(), ": no terms"));
    }
  }

  std::vector<NameEntry> names;
  std::set<std::string> seen_names;
  const auto names_path = dir / "names.jsonl";
  if (!std::filesystem::is_regular_file(names_path)) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(names_path.string(), ": missing names file"));
  }
  SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
      names_path, [&](size_t line, const Json& json) -> absl::Status {
        const std::string where = absl::StrCat(names_path.string(), ":", line);
        NameEntry entry;
        SOCEVAL_ASSIGN_OR_RETURN(entry.name, RequireString(json, "name", where));
        SOCEVAL_ASSIGN_OR_RETURN(const std::string gender,
                                 RequireString(json, "gender_label", where));
        SOCEVAL_ASSIGN_OR_RETURN(const std::string race,
                                 RequireString(json, "race_label", where));
        if (gender != "female" && gender != "male") {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": bad gender_label '", gender, "'"));
        }
        if (race != "white" && race != "non_white") {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": bad race_label '", race, "'"));
        }
        entry.gender = gender == "female" ? GenderLabel::kFemale : GenderLabel::kMale;
        entry.race = race == "white" ? RaceLabel::kWhite : RaceLabel::kNonWhite;
        entry.curated = OptionalBool(json, "curated");
        if (entry.name.empty()) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": empty name"));
        }
        if (!seen_names.insert(entry.name).second) {
          return MakeError(ErrorKind::kDuplicateTerm,
                           absl::StrCat(where, ": name ", entry.name));
        }
        names.push_back(std::move(entry));
        return absl::OkStatus();
      }));

  Lexicon lexicon(std::move(terms), std::move(names));

  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::is_regular_file(manifest_path)) {
    SOCEVAL_ASSIGN_OR_RETURN(const std::string text, ReadFile(manifest_path));
    const Json expected = Json::parse(text, nullptr, false);
    if (expected.is_discarded()) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat(manifest_path.string(), ": invalid JSON"));
    }
    const Json actual = lexicon.Manifest();
    if (expected != actual) {
      return MakeError(ErrorKind::kCountMismatch,
                       absl::StrCat(manifest_path.string(), ": expected ",
                                    expected.dump(), ", loaded ", actual.dump()));
    }
  }
  return lexicon;
}

absl::StatusOr<std::vector<Term>> ComposeIntersections(
    const Lexicon& lexicon, std::span<const Domain> domains,
    const CompositionOptions& options) {
  const auto& rules = PermittedCompositions();
  const bool permitted = std::any_of(rules.begin(), rules.end(), [&](const auto& r) {
    return std::equal(r.begin(), r.end(), domains.begin(), domains.end());
  });
  if (!permitted) {
    std::string shape;
    for (Domain d : domains) absl::StrAppend(&shape, shape.empty() ? "" : "+", DomainName(d));
    return MakeError(ErrorKind::kUnsupportedDomainCombination, shape);
  }

  // Attribute domains are every domain but the trailing gender head.
  const std::span<const Domain> attribute_domains = domains.first(domains.size() - 1);
  std::vector<std::vector<const Term*>> pools;
  for (Domain d : attribute_domains) pools.push_back(lexicon.TermsIn(d));
  const std::vector<const Term*> heads = lexicon.TermsIn(Domain::kGender);

  std::vector<Term> out;
  std::vector<size_t> cursor(pools.size(), 0);
  const bool any_empty = std::any_of(pools.begin(), pools.end(),
                                     [](const auto& p) { return p.empty(); });
  if (any_empty || heads.empty()) return out;

  while (true) {
    std::vector<std::string> adjectives;
    std::vector<const Term*> parts;
    for (size_t i = 0; i < pools.size(); ++i) {
      const Term* attr = pools[i][cursor[i]];
      SOCEVAL_ASSIGN_OR_RETURN(std::string adj, AttributeAdjective(*attr));
      adjectives.push_back(std::move(adj));
      parts.push_back(attr);
    }
    for (const Term* head : heads) {
      if (head->possessive && !options.include_possessive) continue;
      if (head->surface_singular.empty()) {
        return MakeError(ErrorKind::kMissingSingularForm, head->id);
      }
      Term composite;
      composite.domain = Domain::kComposite;
      composite.composition.assign(domains.begin(), domains.end());
      for (const Term* p : parts) {
        composite.components.push_back(p->id);
        composite.subgroups.push_back(p->subgroup());
        composite.curated = composite.curated || p->curated;
      }
      composite.components.push_back(head->id);
      composite.subgroups.push_back(head->subgroup());
      composite.curated = composite.curated || head->curated;
      composite.id = absl::StrJoin(composite.components, "+");
      composite.possessive = head->possessive;
      composite.surface_plural =
          ComposeSurface(adjectives, head->surface_plural, head->possessive);
      composite.surface_singular =
          ComposeSurface(adjectives, head->surface_singular, head->possessive);
      out.push_back(std::move(composite));
    }
    // Odometer increment over the attribute pools, last pool fastest.
    size_t i = pools.size();
    while (i > 0) {
      --i;
      if (++cursor[i] < pools[i].size()) break;
      cursor[i] = 0;
      if (i == 0) return out;
    }
  }
}

absl::StatusOr<std::string> SingularForm(const Term& term) {
  if (term.domain == Domain::kSocioeconomic || term.surface_singular.empty()) {
    return MakeError(ErrorKind::kMissingSingularForm, term.id);
  }
  return term.surface_singular;
}

absl::StatusOr<std::vector<Term>> TargetTerms(const Lexicon& lexicon,
                                              const CompositionOptions& options) {
  std::vector<Term> out;
  for (Domain d : {Domain::kGender, Domain::kMarital, Domain::kRace,
                   Domain::kReligion, Domain::kNeutral}) {
    for (const Term* t : lexicon.TermsIn(d)) out.push_back(*t);
  }
  for (const auto& rule : PermittedCompositions()) {
    SOCEVAL_ASSIGN_OR_RETURN(std::vector<Term> composites,
                             ComposeIntersections(lexicon, rule, options));
    for (Term& t : composites) out.push_back(std::move(t));
  }
  for (const NameEntry& entry : lexicon.names()) out.push_back(entry.AsTerm());
  return out;
}

absl::string_view FillClassName(FillClass fill_class) {
  switch (fill_class) {
    case FillClass::kPoor:
      return "poor";
    case FillClass::kRich:
      return "rich";
    case FillClass::kIrrelevant:
      return "irrelevant";
  }
  return "irrelevant";
}

absl::StatusOr<FillClass> ParseFillClass(absl::string_view name) {
  if (name == "poor") return FillClass::kPoor;
  if (name == "rich") return FillClass::kRich;
  if (name == "irrelevant") return FillClass::kIrrelevant;
  return MakeError(ErrorKind::kMalformedFile,
                   absl::StrCat("unknown fill class '", name, "'"));
}

std::vector<FillWord> SocioeconomicFills(const Lexicon& lexicon) {
  std::vector<FillWord> poor;
  std::vector<FillWord> rich;
  for (const Term* t : lexicon.TermsIn(Domain::kSocioeconomic)) {
    FillWord fill{t->id, t->surface_plural,
                  t->subgroup() == "poor" ? FillClass::kPoor : FillClass::kRich};
    (fill.fill_class == FillClass::kPoor ? poor : rich).push_back(std::move(fill));
  }
  poor.insert(poor.end(), rich.begin(), rich.end());
  return poor;
}

absl::StatusOr<std::vector<FillWord>> LoadIrrelevantSet(
    const std::filesystem::path& path) {
  std::vector<FillWord> out;
  std::set<std::string> ids;
  SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
      path, [&](size_t line, const Json& json) -> absl::Status {
        const std::string where = absl::StrCat(path.string(), ":", line);
        FillWord fill;
        SOCEVAL_ASSIGN_OR_RETURN(fill.id, RequireString(json, "id", where));
        SOCEVAL_ASSIGN_OR_RETURN(fill.surface, RequireString(json, "surface", where));
        fill.fill_class = FillClass::kIrrelevant;
        if (!ids.insert(fill.id).second) {
          return MakeError(ErrorKind::kDuplicateTerm, absl::StrCat(where, ": ", fill.id));
        }
        out.push_back(std::move(fill));
        return absl::OkStatus();
      }));
  return out;
}

}  // namespace soceval
