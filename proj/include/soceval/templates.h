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

// Template sentences with one [TARGET] and one [MASK] slot, the structural
// validator, and the perturbation pipeline that grows 50 seed sentences into
// the full template set.
//
// A templates directory holds:
//
//   seeds.jsonl               seed sentences with annotated verb frames
//   grammar_overrides.jsonl   hand-written variants for frames a rule cannot
//                             transform
//   curated/structural_short.jsonl
//   curated/structural_reorder.jsonl
//   curated/semantic_paraphrase.jsonl

#ifndef SOCEVAL_TEMPLATES_H_
#define SOCEVAL_TEMPLATES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "soceval/io.h"

namespace soceval {

inline constexpr absl::string_view kTargetToken = "[TARGET]";
inline constexpr absl::string_view kMaskToken = "[MASK]";

enum class TemplateCategory {
  kMain,
  kLexicalAdverb,
  kLexicalQuantifier,
  kStructuralShort,
  kStructuralReorder,
  kGrammarSingular,
  kGrammarFuture,
  kGrammarPast,
  kGrammarActive,
  kSemanticParaphrase,
};

inline constexpr TemplateCategory kAllCategories[] = {
    TemplateCategory::kMain,
    TemplateCategory::kLexicalAdverb,
    TemplateCategory::kLexicalQuantifier,
    TemplateCategory::kStructuralShort,
    TemplateCategory::kStructuralReorder,
    TemplateCategory::kGrammarSingular,
    TemplateCategory::kGrammarFuture,
    TemplateCategory::kGrammarPast,
    TemplateCategory::kGrammarActive,
    TemplateCategory::kSemanticParaphrase,
};

absl::string_view CategoryName(TemplateCategory category);
absl::StatusOr<TemplateCategory> ParseCategory(absl::string_view name);

// Number of templates per category in the shipped data.
size_t ExpectedCount(TemplateCategory category);
inline constexpr size_t kExpectedTemplateTotal = 843;

enum class Number { kPlural, kSingular };

absl::string_view NumberName(Number number);
absl::StatusOr<Number> ParseNumber(absl::string_view name);

// Annotated seed sentence:
//   text == lead + subject + " " + copula + " often " + predicate
// `subject` is "[TARGET]" or "The <possessed> of [TARGET]". `active` is the
// present-active predicate following "[TARGET] often ", or unset when the
// frame has no natural active form.
struct VerbFrame {
  std::string lead;
  std::string subject;
  std::string copula;
  std::string predicate;
  std::optional<std::string> active;
  std::optional<std::string> possessed;

  std::string Render() const;
};

struct Template {
  std::string id;
  std::string seed_id;
  std::string text;
  TemplateCategory category = TemplateCategory::kMain;
  Number number = Number::kPlural;
  std::optional<std::string> adverb;
  std::optional<std::string> quantifier;
  std::optional<VerbFrame> frame;

  Json ToJson() const;
  static absl::StatusOr<Template> FromJson(const Json& json);
};

// "t" + 16 hex digits of SHA-256 over (seed_id, category, text).
std::string TemplateId(absl::string_view seed_id, TemplateCategory category,
                       absl::string_view text);

Template MakeTemplate(std::string seed_id, TemplateCategory category,
                      std::string text, Number number);

// Violation codes.
inline constexpr absl::string_view kMissingTarget = "missing_target";
inline constexpr absl::string_view kDuplicateTarget = "duplicate_target";
inline constexpr absl::string_view kMissingMask = "missing_mask";
inline constexpr absl::string_view kDuplicateMask = "duplicate_mask";
inline constexpr absl::string_view kMaskInitial = "mask_initial";
inline constexpr absl::string_view kMaskBeforeTarget = "mask_before_target";
inline constexpr absl::string_view kTargetBeforeMask = "target_before_mask";
inline constexpr absl::string_view kUnknownPlaceholder = "unknown_placeholder";
// Warning codes.
inline constexpr absl::string_view kFinancialContextMissing =
    "financial_context_missing";
inline constexpr absl::string_view kExtraSensitiveTerm = "extra_sensitive_term";

struct Finding {
  std::string code;
  std::string detail;
};

struct ValidationResult {
  std::vector<Finding> violations;
  std::vector<Finding> warnings;

  bool ok() const { return violations.empty(); }
  bool Has(absl::string_view code) const;
  Json ToJson() const;
};

// Never fails; returns every violated constraint. The financial-context and
// single-sensitive-term checks only produce warnings.
ValidationResult ValidateTemplate(absl::string_view text);

inline constexpr absl::string_view kReplacementAdverbs[] = {
    "not often", "always", "never", "usually", "rarely"};

// Five variants replacing the word "often". AdverbNotFound without it.
absl::StatusOr<std::vector<Template>> PerturbAdverbs(const Template& seed);

// "some of [TARGET]" and "all [TARGET]" variants.
absl::StatusOr<std::vector<Template>> PerturbQuantifiers(const Template& seed);

// One grammar transform of a seed with a verb frame. `category` is one of the
// four grammar categories. TransformationNotApplicable when the frame has no
// rule for it.
absl::StatusOr<Template> GrammarTransform(const Template& seed,
                                          TemplateCategory category);

// Hand-written grammar variants keyed by (seed_id, category).
using GrammarOverrides =
    std::map<std::pair<std::string, TemplateCategory>, Template>;

absl::StatusOr<GrammarOverrides> LoadGrammarOverrides(
    const std::filesystem::path& path);

// Singular, future, past, and active variants. A transform that is not
// applicable falls back to `overrides`; without an override the error is
// returned.
absl::StatusOr<std::vector<Template>> PerturbGrammar(
    const Template& seed, const GrammarOverrides& overrides);

// Seeds file: main-category records with a "frame" object. Every seed must
// validate and render from its frame.
absl::StatusOr<std::vector<Template>> LoadSeeds(
    const std::filesystem::path& path);

// Curated records of one category. CountMismatch when `expected` is set and
// differs; ValidationFailure naming the line for an invalid template.
absl::StatusOr<std::vector<Template>> LoadCurated(
    const std::filesystem::path& path, TemplateCategory category,
    std::optional<size_t> expected = std::nullopt);

struct TemplateSet {
  // Sorted by id.
  std::vector<Template> templates;
  // Non-fatal problems, e.g. a missing curated file.
  std::vector<std::string> warnings;

  std::map<TemplateCategory, size_t> CategoryCounts() const;
  size_t CountNumber(Number number) const;
  // Per-category counts, total, and warnings.
  Json Manifest() const;
  // One JSON object per line in id order.
  std::string Serialize() const;
};

// Seeds plus every mechanical variant plus the curated files under
// `curated_dir`. A missing curated file is a CountMismatch warning; a
// present file with the wrong count is an error.
absl::StatusOr<TemplateSet> BuildTemplateSet(
    const std::vector<Template>& seeds, const GrammarOverrides& overrides,
    const std::filesystem::path& curated_dir);

// Loads seeds.jsonl, grammar_overrides.jsonl and curated/ from `dir`.
absl::StatusOr<TemplateSet> BuildTemplateSetFromDir(
    const std::filesystem::path& dir);

// Source of paraphrases for regenerating the semantic file.
class ParaphraseProvider {
 public:
  virtual ~ParaphraseProvider() = default;
  virtual absl::StatusOr<std::vector<std::string>> Paraphrase(
      const Template& seed, int k) = 0;
};

// Asks `provider` for `k` paraphrases per seed and keeps the ones that
// validate, tagging them semantic_paraphrase. Invalid candidates are skipped.
absl::StatusOr<std::vector<Template>> GenerateParaphrases(
    const std::vector<Template>& seeds, ParaphraseProvider& provider, int k);

}  // namespace soceval

#endif  // SOCEVAL_TEMPLATES_H_
