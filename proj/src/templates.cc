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

#include "soceval/templates.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "soceval/status.h"

namespace soceval {
namespace {

struct CategoryInfo {
  TemplateCategory category;
  absl::string_view name;
  size_t expected;
};

constexpr std::array<CategoryInfo, 10> kCategoryInfo = {{
    {TemplateCategory::kMain, "main", 50},
    {TemplateCategory::kLexicalAdverb, "lexical_adverb", 250},
    {TemplateCategory::kLexicalQuantifier, "lexical_quantifier", 100},
    {TemplateCategory::kStructuralShort, "structural_short", 21},
    {TemplateCategory::kStructuralReorder, "structural_reorder", 124},
    {TemplateCategory::kGrammarSingular, "grammar_singular", 50},
    {TemplateCategory::kGrammarFuture, "grammar_future", 50},
    {TemplateCategory::kGrammarPast, "grammar_past", 50},
    {TemplateCategory::kGrammarActive, "grammar_active", 50},
    {TemplateCategory::kSemanticParaphrase, "semantic_paraphrase", 98},
}};

constexpr TemplateCategory kCuratedCategories[] = {
    TemplateCategory::kStructuralShort, TemplateCategory::kStructuralReorder,
    TemplateCategory::kSemanticParaphrase};

constexpr TemplateCategory kGrammarCategories[] = {
    TemplateCategory::kGrammarSingular, TemplateCategory::kGrammarFuture,
    TemplateCategory::kGrammarPast, TemplateCategory::kGrammarActive};

// Lowercase stems; a template word starting with any of them counts as
// financial context.
constexpr absl::string_view kFinancialStems[] = {
    "financ", "econom", "wealth", "income", "money",  "bank",    "loan",
    "lender", "credit", "mortgage", "propert", "hous", "rent",   "salar",
    "wage",   "job",    "debt",   "tax",    "insur",  "invest",  "saving",
    "market", "budget", "spend",  "purchas", "pay",   "cost",    "class",
    "status", "living", "retire", "business", "lifestyle", "neighborhood",
    "earning", "prospect", "profile", "standing", "afford", "price",
    "employ", "educat", "healthcare", "opportunit", "life"};

constexpr absl::string_view kSensitiveWords[] = {
    "man",       "men",        "woman",    "women",   "boy",      "boys",
    "girl",      "girls",      "male",     "female",  "married",  "divorced",
    "widowed",   "separated",  "white",    "black",   "asian",    "latino",
    "arab",      "indigenous", "muslim",   "hindu",   "buddhist", "taoist",
    "shintoist", "sikh",       "jewish",   "christian"};

size_t CountOccurrences(absl::string_view text, absl::string_view needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != absl::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// True when `first` is followed, after optional whitespace only, by `second`
// somewhere in `text`.
bool Adjacent(absl::string_view text, absl::string_view first,
              absl::string_view second) {
  for (size_t pos = text.find(first); pos != absl::string_view::npos;
       pos = text.find(first, pos + 1)) {
    size_t next = pos + first.size();
    while (next < text.size() &&
           std::isspace(static_cast<unsigned char>(text[next]))) {
      ++next;
    }
    if (absl::StartsWith(text.substr(next), second)) return true;
  }
  return false;
}

std::vector<std::string> LowerWords(absl::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '-') {
      current.push_back(absl::ascii_tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

// Position of the standalone word "often", or npos.
size_t FindOften(absl::string_view text) {
  constexpr absl::string_view kOften = "often";
  for (size_t pos = text.find(kOften); pos != absl::string_view::npos;
       pos = text.find(kOften, pos + 1)) {
    const bool left_ok =
        pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
    const size_t end = pos + kOften.size();
    const bool right_ok =
        end == text.size() || !std::isalpha(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return pos;
  }
  return absl::string_view::npos;
}

std::string CapitalizeFirst(std::string text) {
  if (!text.empty()) {
    text[0] = absl::ascii_toupper(static_cast<unsigned char>(text[0]));
  }
  return text;
}

absl::Status CheckValid(const Template& t, absl::string_view where) {
  const ValidationResult result = ValidateTemplate(t.text);
  if (result.ok()) return absl::OkStatus();
  std::vector<std::string> codes;
  for (const Finding& f : result.violations) codes.push_back(f.code);
  return MakeError(ErrorKind::kValidationFailure,
                   absl::StrCat(where, ": \"", t.text, "\" violates ",
                                absl::StrJoin(codes, ",")));
}

absl::StatusOr<VerbFrame> FrameFromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kMalformedFile, "frame is not an object");
  }
  VerbFrame frame;
  for (auto [field, dest] :
       {std::pair{"lead", &frame.lead}, std::pair{"subject", &frame.subject},
        std::pair{"copula", &frame.copula},
        std::pair{"predicate", &frame.predicate}}) {
    const auto it = json.find(field);
    if (it == json.end() || !it->is_string()) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat("frame missing '", field, "'"));
    }
    *dest = it->get<std::string>();
  }
  if (const auto it = json.find("active"); it != json.end() && it->is_string()) {
    frame.active = it->get<std::string>();
  }
  if (const auto it = json.find("possessed");
      it != json.end() && it->is_string()) {
    frame.possessed = it->get<std::string>();
  }
  return frame;
}

Json FrameToJson(const VerbFrame& frame) {
  return Json{{"lead", frame.lead},
              {"subject", frame.subject},
              {"copula", frame.copula},
              {"predicate", frame.predicate},
              {"active", frame.active ? Json(*frame.active) : Json(nullptr)},
              {"possessed",
               frame.possessed ? Json(*frame.possessed) : Json(nullptr)}};
}

}  // namespace

absl::string_view CategoryName(TemplateCategory category) {
  for (const auto& info : kCategoryInfo) {
    if (info.category == category) return info.name;
  }
  return "unknown";
}

absl::StatusOr<TemplateCategory> ParseCategory(absl::string_view name) {
  for (const auto& info : kCategoryInfo) {
    if (info.name == name) return info.category;
  }
  return MakeError(ErrorKind::kMalformedFile,
                   absl::StrCat("unknown template category '", name, "'"));
}

size_t ExpectedCount(TemplateCategory category) {
  for (const auto& info : kCategoryInfo) {
    if (info.category == category) return info.expected;
  }
  return 0;
}

absl::string_view NumberName(Number number) {
  return number == Number::kPlural ? "plural" : "singular";
}

absl::StatusOr<Number> ParseNumber(absl::string_view name) {
  if (name == "plural") return Number::kPlural;
  if (name == "singular") return Number::kSingular;
  return MakeError(ErrorKind::kMalformedFile,
                   absl::StrCat("unknown number '", name, "'"));
}

std::string VerbFrame::Render() const {
  return absl::StrCat(lead, subject, " ", copula, " often ", predicate);
}

Json Template::ToJson() const {
  Json json = {{"id", id},
               {"seed_id", seed_id},
               {"text", text},
               {"category", CategoryName(category)},
               {"number", NumberName(number)}};
  if (adverb) json["adverb"] = *adverb;
  if (quantifier) json["quantifier"] = *quantifier;
  if (frame) json["frame"] = FrameToJson(*frame);
  return json;
}

absl::StatusOr<Template> Template::FromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kMalformedFile, "template is not an object");
  }
  auto get = [&](absl::string_view field) -> absl::StatusOr<std::string> {
    const auto it = json.find(field);
    if (it == json.end() || !it->is_string()) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat("template missing '", field, "'"));
    }
    return it->get<std::string>();
  };
  Template t;
  SOCEVAL_ASSIGN_OR_RETURN(t.seed_id, get("seed_id"));
  SOCEVAL_ASSIGN_OR_RETURN(t.text, get("text"));
  SOCEVAL_ASSIGN_OR_RETURN(const std::string category, get("category"));
  SOCEVAL_ASSIGN_OR_RETURN(t.category, ParseCategory(category));
  SOCEVAL_ASSIGN_OR_RETURN(const std::string number, get("number"));
  SOCEVAL_ASSIGN_OR_RETURN(t.number, ParseNumber(number));
  if (const auto it = json.find("adverb"); it != json.end() && it->is_string()) {
    t.adverb = it->get<std::string>();
  }
  if (const auto it = json.find("quantifier");
      it != json.end() && it->is_string()) {
    t.quantifier = it->get<std::string>();
  }
  if (const auto it = json.find("frame"); it != json.end()) {
    SOCEVAL_ASSIGN_OR_RETURN(t.frame, FrameFromJson(*it));
  }
  t.id = TemplateId(t.seed_id, t.category, t.text);
  if (const auto it = json.find("id"); it != json.end() && it->is_string() &&
                                       it->get<std::string>() != t.id) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat("template id ", it->get<std::string>(),
                                  " does not match its content"));
  }
  return t;
}

std::string TemplateId(absl::string_view seed_id, TemplateCategory category,
                       absl::string_view text) {
  const std::string digest = Sha256Hex(
      absl::StrCat(seed_id, "\x1f", CategoryName(category), "\x1f", text));
  return absl::StrCat("t", digest.substr(0, 16));
}

Template MakeTemplate(std::string seed_id, TemplateCategory category,
                      std::string text, Number number) {
  Template t;
  t.id = TemplateId(seed_id, category, text);
  t.seed_id = std::move(seed_id);
  t.text = std::move(text);
  t.category = category;
  t.number = number;
  return t;
}

bool ValidationResult::Has(absl::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Finding& f) { return f.code == code; });
}

Json ValidationResult::ToJson() const {
  auto list = [](const std::vector<Finding>& findings) {
    Json out = Json::array();
    for (const Finding& f : findings) {
      out.push_back({{"code", f.code}, {"detail", f.detail}});
    }
    return out;
  };
  return Json{{"ok", ok()},
              {"violations", list(violations)},
              {"warnings", list(warnings)}};
}

ValidationResult ValidateTemplate(absl::string_view text) {
  ValidationResult result;
  auto violate = [&](absl::string_view code, std::string detail) {
    result.violations.push_back({std::string(code), std::move(detail)});
  };

  const size_t targets = CountOccurrences(text, kTargetToken);
  const size_t masks = CountOccurrences(text, kMaskToken);
  if (targets == 0) violate(kMissingTarget, "no [TARGET] slot");
  if (targets > 1) violate(kDuplicateTarget, absl::StrCat(targets, " [TARGET] slots"));
  if (masks == 0) violate(kMissingMask, "no [MASK] slot");
  if (masks > 1) violate(kDuplicateMask, absl::StrCat(masks, " [MASK] slots"));

  for (size_t open = text.find('['); open != absl::string_view::npos;
       open = text.find('[', open + 1)) {
    const size_t close = text.find(']', open);
    if (close == absl::string_view::npos) break;
    const absl::string_view token = text.substr(open, close - open + 1);
    if (token != kTargetToken && token != kMaskToken) {
      violate(kUnknownPlaceholder, std::string(token));
    }
  }

  const size_t first = text.find_first_not_of(" \t\r\n\"'(`");
  if (first != absl::string_view::npos &&
      absl::StartsWith(text.substr(first), kMaskToken)) {
    violate(kMaskInitial, "[MASK] opens the sentence");
  }
  if (Adjacent(text, kMaskToken, kTargetToken)) {
    violate(kMaskBeforeTarget, "[MASK] immediately precedes [TARGET]");
  }
  if (Adjacent(text, kTargetToken, kMaskToken)) {
    violate(kTargetBeforeMask, "[TARGET] immediately precedes [MASK]");
  }

  const std::vector<std::string> words = LowerWords(text);
  const bool financial = std::any_of(words.begin(), words.end(), [](const auto& w) {
    return std::any_of(std::begin(kFinancialStems), std::end(kFinancialStems),
                       [&](absl::string_view stem) { return absl::StartsWith(w, stem); });
  });
  if (!financial) {
    result.warnings.push_back(
        {std::string(kFinancialContextMissing), "no financial context keyword"});
  }
  for (const std::string& w : words) {
    if (std::find(std::begin(kSensitiveWords), std::end(kSensitiveWords), w) !=
        std::end(kSensitiveWords)) {
      result.warnings.push_back({std::string(kExtraSensitiveTerm), w});
    }
  }
  return result;
}

absl::StatusOr<std::vector<Template>> PerturbAdverbs(const Template& seed) {
  const size_t pos = FindOften(seed.text);
  if (pos == absl::string_view::npos) {
    return MakeError(ErrorKind::kAdverbNotFound,
                     absl::StrCat(seed.seed_id, ": \"", seed.text, "\""));
  }
  std::vector<Template> out;
  for (absl::string_view adverb : kReplacementAdverbs) {
    std::string text = seed.text;
    text.replace(pos, absl::string_view("often").size(), std::string(adverb));
    Template t = MakeTemplate(seed.seed_id, TemplateCategory::kLexicalAdverb,
                              std::move(text), seed.number);
    t.adverb = std::string(adverb);
    SOCEVAL_RETURN_IF_ERROR(CheckValid(t, seed.seed_id));
    out.push_back(std::move(t));
  }
  return out;
}

absl::StatusOr<std::vector<Template>> PerturbQuantifiers(const Template& seed) {
  const size_t pos = seed.text.find(kTargetToken.data(), 0, kTargetToken.size());
  if (pos == std::string::npos) {
    return MakeError(ErrorKind::kValidationFailure,
                     absl::StrCat(seed.seed_id, ": no [TARGET] slot"));
  }
  std::vector<Template> out;
  for (absl::string_view quantifier : {"some of", "all"}) {
    std::string prefix = absl::StrCat(quantifier, " ");
    const bool initial =
        seed.text.find_first_not_of(" \t") == pos;
    if (initial) prefix = CapitalizeFirst(prefix);
    std::string text = seed.text;
    text.insert(pos, prefix);
    Template t = MakeTemplate(seed.seed_id, TemplateCategory::kLexicalQuantifier,
                              std::move(text), seed.number);
    t.quantifier = std::string(quantifier);
    SOCEVAL_RETURN_IF_ERROR(CheckValid(t, seed.seed_id));
    out.push_back(std::move(t));
  }
  return out;
}

absl::StatusOr<Template> GrammarTransform(const Template& seed,
                                          TemplateCategory category) {
  if (!seed.frame) {
    return MakeError(ErrorKind::kTransformationNotApplicable,
                     absl::StrCat(seed.seed_id, ": no verb frame"));
  }
  const VerbFrame& f = *seed.frame;
  const bool target_subject = f.subject == kTargetToken;
  std::string text;
  Number number = Number::kPlural;
  switch (category) {
    case TemplateCategory::kGrammarSingular:
      number = Number::kSingular;
      if (target_subject && f.copula == "are") {
        text = absl::StrCat(f.lead, kTargetToken, " is often ", f.predicate);
      } else if (f.possessed) {
        // "The income of [TARGET] is" becomes "[TARGET]'s income is".
        text = CapitalizeFirst(absl::StrCat(f.lead, kTargetToken, "'s ",
                                            *f.possessed, " ", f.copula,
                                            " often ", f.predicate));
      }
      break;
    case TemplateCategory::kGrammarFuture:
      text = absl::StrCat(f.lead, f.subject, " will often be ", f.predicate);
      break;
    case TemplateCategory::kGrammarPast:
      if (f.copula == "are" || f.copula == "is") {
        text = absl::StrCat(f.lead, f.subject, f.copula == "are" ? " were" : " was",
                            " often ", f.predicate);
      }
      break;
    case TemplateCategory::kGrammarActive:
      if (f.active) {
        text = absl::StrCat(f.lead, kTargetToken, " often ", *f.active);
      }
      break;
    default:
      return MakeError(ErrorKind::kTransformationNotApplicable,
                       absl::StrCat(CategoryName(category),
                                    " is not a grammar category"));
  }
  if (text.empty()) {
    return MakeError(ErrorKind::kTransformationNotApplicable,
                     absl::StrCat(seed.seed_id, ": ", CategoryName(category)));
  }
  Template t = MakeTemplate(seed.seed_id, category, std::move(text), number);
  SOCEVAL_RETURN_IF_ERROR(CheckValid(t, seed.seed_id));
  return t;
}

absl::StatusOr<GrammarOverrides> LoadGrammarOverrides(
    const std::filesystem::path& path) {
  GrammarOverrides overrides;
  if (!std::filesystem::is_regular_file(path)) return overrides;
  SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
      path, [&](size_t line, const Json& json) -> absl::Status {
        const std::string where = absl::StrCat(path.string(), ":", line);
        auto t = Template::FromJson(json);
        if (!t.ok()) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": ", t.status().message()));
        }
        if (std::find(std::begin(kGrammarCategories), std::end(kGrammarCategories),
                      t->category) == std::end(kGrammarCategories)) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": override category must be grammar_*"));
        }
        SOCEVAL_RETURN_IF_ERROR(CheckValid(*t, where));
        auto key = std::make_pair(t->seed_id, t->category);
        if (!overrides.emplace(std::move(key), *std::move(t)).second) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": duplicate override"));
        }
        return absl::OkStatus();
      }));
  return overrides;
}

absl::StatusOr<std::vector<Template>> PerturbGrammar(
    const Template& seed, const GrammarOverrides& overrides) {
  if (seed.category != TemplateCategory::kMain) {
    return MakeError(ErrorKind::kTransformationNotApplicable,
                     absl::StrCat(seed.seed_id, ": not a main template"));
  }
  std::vector<Template> out;
  for (TemplateCategory category : kGrammarCategories) {
    auto t = GrammarTransform(seed, category);
    if (!t.ok() && HasKind(t.status(), ErrorKind::kTransformationNotApplicable)) {
      const auto it = overrides.find({seed.seed_id, category});
      if (it == overrides.end()) return t.status();
      t = it->second;
    }
    if (!t.ok()) return t.status();
    out.push_back(*std::move(t));
  }
  return out;
}

absl::StatusOr<std::vector<Template>> LoadSeeds(
    const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    return MakeError(ErrorKind::kIo, absl::StrCat("missing ", path.string()));
  }
  std::vector<Template> seeds;
  std::set<std::string> ids;
  SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
      path, [&](size_t line, const Json& json) -> absl::Status {
        const std::string where = absl::StrCat(path.string(), ":", line);
        auto t = Template::FromJson(json);
        if (!t.ok()) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": ", t.status().message()));
        }
        if (t->category != TemplateCategory::kMain || !t->frame) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": seeds need category main and a frame"));
        }
        if (t->frame->Render() != t->text) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": frame renders \"",
                                        t->frame->Render(), "\""));
        }
        SOCEVAL_RETURN_IF_ERROR(CheckValid(*t, where));
        if (!ids.insert(t->seed_id).second) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": duplicate seed ", t->seed_id));
        }
        seeds.push_back(*std::move(t));
        return absl::OkStatus();
      }));
  return seeds;
}

absl::StatusOr<std::vector<Template>> LoadCurated(
    const std::filesystem::path& path, TemplateCategory category,
    std::optional<size_t> expected) {
  if (std::find(std::begin(kCuratedCategories), std::end(kCuratedCategories),
                category) == std::end(kCuratedCategories)) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(CategoryName(category), " is not a curated category"));
  }
  if (!std::filesystem::is_regular_file(path)) {
    return MakeError(ErrorKind::kIo, absl::StrCat("missing ", path.string()));
  }
  std::vector<Template> out;
  SOCEVAL_RETURN_IF_ERROR(ForEachJsonLine(
      path, [&](size_t line, const Json& json) -> absl::Status {
        const std::string where = absl::StrCat(path.string(), ":", line);
        auto t = Template::FromJson(json);
        if (!t.ok()) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": ", t.status().message()));
        }
        if (t->category != category) {
          return MakeError(ErrorKind::kMalformedFile,
                           absl::StrCat(where, ": category ", CategoryName(t->category),
                                        ", expected ", CategoryName(category)));
        }
        SOCEVAL_RETURN_IF_ERROR(CheckValid(*t, where));
        out.push_back(*std::move(t));
        return absl::OkStatus();
      }));
  if (expected && out.size() != *expected) {
    return MakeError(ErrorKind::kCountMismatch,
                     absl::StrCat(path.string(), ": ", CategoryName(category),
                                  " expected ", *expected, ", found ", out.size()));
  }
  return out;
}

std::map<TemplateCategory, size_t> TemplateSet::CategoryCounts() const {
  std::map<TemplateCategory, size_t> counts;
  for (TemplateCategory c : kAllCategories) counts[c] = 0;
  for (const Template& t : templates) ++counts[t.category];
  return counts;
}

size_t TemplateSet::CountNumber(Number number) const {
  return static_cast<size_t>(std::count_if(
      templates.begin(), templates.end(),
      [&](const Template& t) { return t.number == number; }));
}

Json TemplateSet::Manifest() const {
  Json categories = Json::object();
  for (const auto& [category, n] : CategoryCounts()) {
    categories[std::string(CategoryName(category))] = n;
  }
  return Json{{"categories", categories},
              {"total", templates.size()},
              {"plural", CountNumber(Number::kPlural)},
              {"singular", CountNumber(Number::kSingular)},
              {"warnings", warnings}};
}

std::string TemplateSet::Serialize() const {
  std::string out;
  for (const Template& t : templates) {
    Json json = t.ToJson();
    json.erase("frame");
    absl::StrAppend(&out, json.dump(), "\n");
  }
  return out;
}

absl::StatusOr<TemplateSet> BuildTemplateSet(
    const std::vector<Template>& seeds, const GrammarOverrides& overrides,
    const std::filesystem::path& curated_dir) {
  TemplateSet set;
  for (const Template& seed : seeds) {
    set.templates.push_back(seed);
    SOCEVAL_ASSIGN_OR_RETURN(std::vector<Template> adverbs, PerturbAdverbs(seed));
    SOCEVAL_ASSIGN_OR_RETURN(std::vector<Template> quantified,
                             PerturbQuantifiers(seed));
    SOCEVAL_ASSIGN_OR_RETURN(std::vector<Template> grammar,
                             PerturbGrammar(seed, overrides));
    for (auto* batch : {&adverbs, &quantified, &grammar}) {
      std::move(batch->begin(), batch->end(), std::back_inserter(set.templates));
    }
  }
  for (TemplateCategory category : kCuratedCategories) {
    const auto path = curated_dir / absl::StrCat(CategoryName(category), ".jsonl");
    if (!std::filesystem::is_regular_file(path)) {
      set.warnings.push_back(absl::StrCat(
          ErrorKindName(ErrorKind::kCountMismatch), ": ", CategoryName(category),
          " expected ", ExpectedCount(category), ", found 0 (", path.string(),
          " missing)"));
      continue;
    }
    SOCEVAL_ASSIGN_OR_RETURN(
        std::vector<Template> curated,
        LoadCurated(path, category, ExpectedCount(category)));
    std::move(curated.begin(), curated.end(), std::back_inserter(set.templates));
  }
  std::sort(set.templates.begin(), set.templates.end(),
            [](const Template& a, const Template& b) { return a.id < b.id; });
  for (size_t i = 1; i < set.templates.size(); ++i) {
    if (set.templates[i].id == set.templates[i - 1].id) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat("duplicate template \"",
                                    set.templates[i].text, "\" for seed ",
                                    set.templates[i].seed_id));
    }
  }
  return set;
}

absl::StatusOr<TemplateSet> BuildTemplateSetFromDir(
    const std::filesystem::path& dir) {
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<Template> seeds,
                           LoadSeeds(dir / "seeds.jsonl"));
  SOCEVAL_ASSIGN_OR_RETURN(GrammarOverrides overrides,
                           LoadGrammarOverrides(dir / "grammar_overrides.jsonl"));
  return BuildTemplateSet(seeds, overrides, dir / "curated");
}

absl::StatusOr<std::vector<Template>> GenerateParaphrases(
    const std::vector<Template>& seeds, ParaphraseProvider& provider, int k) {
  std::vector<Template> out;
  for (const Template& seed : seeds) {
    SOCEVAL_ASSIGN_OR_RETURN(std::vector<std::string> candidates,
                             provider.Paraphrase(seed, k));
    for (std::string& text : candidates) {
      if (!ValidateTemplate(text).ok()) continue;
      const Number number = absl::StrContains(text, "[TARGET] is ")
                                ? Number::kSingular
                                : Number::kPlural;
      out.push_back(MakeTemplate(seed.seed_id,
                                 TemplateCategory::kSemanticParaphrase,
                                 std::move(text), number));
    }
  }
  return out;
}

}  // namespace soceval
