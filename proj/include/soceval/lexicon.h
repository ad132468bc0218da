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

// Term inventories: demographic domains, neutral terms, names, and the
// poor/rich fill words, plus composition of intersectional terms.
//
// A lexicon directory holds one JSON Lines file per domain:
//
//   gender.jsonl marital.jsonl race.jsonl religion.jsonl neutral.jsonl
//   socioeconomic.jsonl names.jsonl [manifest.json]
//
// When manifest.json is present its counts are checked against the loaded
// data.

#ifndef SOCEVAL_LEXICON_H_
#define SOCEVAL_LEXICON_H_

#include <filesystem>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "soceval/io.h"

namespace soceval {

enum class Domain {
  kGender,
  kMarital,
  kRace,
  kReligion,
  kNeutral,
  kName,
  kSocioeconomic,
  kComposite,
};

absl::string_view DomainName(Domain domain);
absl::StatusOr<Domain> ParseDomain(absl::string_view name);

// The four demographic domains in reporting order.
inline constexpr Domain kDemographicDomains[] = {
    Domain::kGender, Domain::kMarital, Domain::kRace, Domain::kReligion};

struct Term {
  std::string id;
  std::string surface_plural;
  std::string surface_singular;
  Domain domain = Domain::kNeutral;
  // One label for simple terms; composites carry one per constituent, in
  // composition order.
  std::vector<std::string> subgroups;
  // "your sons"-style terms.
  bool possessive = false;
  // Entry added beyond the examples published with the original lists.
  bool curated = false;
  // Composites only: constituent domains and term ids, in composition order.
  std::vector<Domain> composition;
  std::vector<std::string> components;

  bool is_composite() const { return !composition.empty(); }
  // Subgroup labels joined with '+'.
  std::string subgroup() const;
  // "gender" for simple terms, "marital+race+gender" for composites.
  std::string DomainKey() const;

  Json ToJson() const;
  static absl::StatusOr<Term> FromJson(const Json& json);
};

enum class GenderLabel { kFemale, kMale };
enum class RaceLabel { kWhite, kNonWhite };

absl::string_view GenderLabelName(GenderLabel label);
absl::string_view RaceLabelName(RaceLabel label);

struct NameEntry {
  std::string name;
  GenderLabel gender = GenderLabel::kFemale;
  RaceLabel race = RaceLabel::kWhite;
  bool curated = false;

  // "white_female", "non_white_male", ...
  std::string Cell() const;
  // The name as a target term: domain kName, subgroups {gender, race}, the
  // name string as both surfaces.
  Term AsTerm() const;
};

// Composite shapes the lexicon knows how to build.
inline const std::vector<std::vector<Domain>>& PermittedCompositions() {
  static const auto* rules = new std::vector<std::vector<Domain>>{
      {Domain::kRace, Domain::kGender},
      {Domain::kMarital, Domain::kGender},
      {Domain::kMarital, Domain::kRace, Domain::kGender},
  };
  return *rules;
}

// Immutable after load; safe to share across threads.
class Lexicon {
 public:
  Lexicon(std::vector<Term> terms, std::vector<NameEntry> names);

  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<NameEntry>& names() const { return names_; }
  const std::vector<std::vector<Domain>>& composition_rules() const {
    return PermittedCompositions();
  }

  // Terms of one domain in file order.
  std::vector<const Term*> TermsIn(Domain domain) const;
  // nullptr when absent.
  const Term* Find(absl::string_view id) const;

  // Per-domain counts, composite counts, and name cell counts.
  Json Manifest() const;

 private:
  std::vector<Term> terms_;
  std::vector<NameEntry> names_;
  std::unordered_map<std::string, size_t> index_;
};

absl::StatusOr<Lexicon> LoadLexicon(const std::filesystem::path& dir);

struct CompositionOptions {
  // Composites whose gender term is possessive ("your White sons").
  bool include_possessive = true;
};

// Builds every composite for `domains`, which must be one of
// PermittedCompositions(). The attribute terms lose their head noun
// ("White people" -> "White") and prefix the gender term in the given order.
absl::StatusOr<std::vector<Term>> ComposeIntersections(
    const Lexicon& lexicon, std::span<const Domain> domains,
    const CompositionOptions& options = {});

// The curated singular surface of a non-socioeconomic term.
absl::StatusOr<std::string> SingularForm(const Term& term);

// Every target term in canonical order: the four demographic domains and
// neutral terms, then the three composite families, then names.
absl::StatusOr<std::vector<Term>> TargetTerms(
    const Lexicon& lexicon, const CompositionOptions& options = {});

// Fill words for the [MASK] slot. Socioeconomic terms become poor/rich
// fills; the LMCS irrelevant set is loaded separately.
enum class FillClass { kPoor, kRich, kIrrelevant };

absl::string_view FillClassName(FillClass fill_class);
absl::StatusOr<FillClass> ParseFillClass(absl::string_view name);

struct FillWord {
  std::string id;
  std::string surface;
  FillClass fill_class = FillClass::kIrrelevant;

  bool relevant() const { return fill_class != FillClass::kIrrelevant; }
};

// The 18 poor/rich fills from the lexicon, poor first, in file order.
std::vector<FillWord> SocioeconomicFills(const Lexicon& lexicon);

// Loads an irrelevant-word list: JSON Lines of {"id", "surface"}.
absl::StatusOr<std::vector<FillWord>> LoadIrrelevantSet(
    const std::filesystem::path& path);

}  // namespace soceval

#endif  // SOCEVAL_LEXICON_H_
