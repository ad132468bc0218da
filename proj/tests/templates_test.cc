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

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "gtest/gtest.h"
#include "soceval/status.h"
#include "test_util.h"

namespace soceval {
namespace {

using ::soceval::testing::TemplatesDir;
using ::soceval::testing::TempDir;
using ::soceval::testing::WriteText;

Template Seed(const std::string& id = "s01") {
  Template t = MakeTemplate(id, TemplateCategory::kMain,
                            "In terms of financial stability, [TARGET] are often seen as [MASK].",
                            Number::kPlural);
  t.frame = VerbFrame{"In terms of financial stability, ", "[TARGET]", "are",
                      "seen as [MASK].", "see themselves as [MASK].", std::nullopt};
  return t;
}

TEST(CategoryTest, NamesRoundTrip) {
  for (TemplateCategory c : kAllCategories) {
    auto parsed = ParseCategory(CategoryName(c));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, c);
  }
  EXPECT_FALSE(ParseCategory("nonsense").ok());
  size_t total = 0;
  for (TemplateCategory c : kAllCategories) total += ExpectedCount(c);
  EXPECT_EQ(total, kExpectedTemplateTotal);
}

TEST(TemplateIdTest, StableAndDistinct) {
  const std::string a = TemplateId("s01", TemplateCategory::kMain, "x [TARGET] [MASK]");
  EXPECT_EQ(a, TemplateId("s01", TemplateCategory::kMain, "x [TARGET] [MASK]"));
  EXPECT_NE(a, TemplateId("s02", TemplateCategory::kMain, "x [TARGET] [MASK]"));
  EXPECT_NE(a, TemplateId("s01", TemplateCategory::kGrammarPast, "x [TARGET] [MASK]"));
  EXPECT_EQ(a.size(), 17u);
  EXPECT_EQ(a[0], 't');
}

TEST(TemplateJsonTest, RoundTrip) {
  Template t = Seed();
  t.adverb = "never";
  auto back = Template::FromJson(t.ToJson());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->ToJson(), t.ToJson());
  EXPECT_EQ(back->frame->Render(), t.text);
}

TEST(ValidatorTest, WellFormedTemplatePasses) {
  const ValidationResult r =
      ValidateTemplate("In terms of wealth, [TARGET] are often seen as [MASK].");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ValidatorTest, Codes) {
  EXPECT_TRUE(ValidateTemplate("Wealthy people are [MASK].").Has(kMissingTarget));
  EXPECT_TRUE(ValidateTemplate("[TARGET] and [TARGET] earn [MASK] money.").Has(kDuplicateTarget));
  EXPECT_TRUE(ValidateTemplate("In finance, [TARGET] are seen.").Has(kMissingMask));
  EXPECT_TRUE(ValidateTemplate("Bank says [TARGET] are [MASK] or [MASK].").Has(kDuplicateMask));
  EXPECT_TRUE(ValidateTemplate("[MASK] bankers think [TARGET] are rich.").Has(kMaskInitial));
  EXPECT_TRUE(ValidateTemplate("In banking, [MASK] [TARGET] earn more.").Has(kMaskBeforeTarget));
  EXPECT_TRUE(ValidateTemplate("In banking, the [TARGET] [MASK] earn more.").Has(kTargetBeforeMask));
  EXPECT_TRUE(ValidateTemplate("In banking, [TARGET] are [MASK] [FOO].").Has(kUnknownPlaceholder));
}

TEST(ValidatorTest, Warnings) {
  const ValidationResult no_finance =
      ValidateTemplate("At the park, [TARGET] are often seen as [MASK].");
  EXPECT_TRUE(no_finance.ok());
  ASSERT_EQ(no_finance.warnings.size(), 1u);
  EXPECT_EQ(no_finance.warnings[0].code, kFinancialContextMissing);

  const ValidationResult sensitive =
      ValidateTemplate("In terms of income, married [TARGET] are often seen as [MASK].");
  EXPECT_TRUE(sensitive.ok());
  ASSERT_EQ(sensitive.warnings.size(), 1u);
  EXPECT_EQ(sensitive.warnings[0].code, kExtraSensitiveTerm);
}

TEST(PerturbTest, AdverbsReplaceOften) {
  auto out = PerturbAdverbs(Seed());
  ASSERT_TRUE(out.ok()) << out.status();
  ASSERT_EQ(out->size(), 5u);
  EXPECT_EQ((*out)[0].text,
            "In terms of financial stability, [TARGET] are not often seen as [MASK].");
  EXPECT_EQ((*out)[4].text,
            "In terms of financial stability, [TARGET] are rarely seen as [MASK].");
  for (const Template& t : *out) {
    EXPECT_EQ(t.category, TemplateCategory::kLexicalAdverb);
    EXPECT_TRUE(t.adverb.has_value());
  }
}

TEST(PerturbTest, AdverbMissing) {
  Template t = MakeTemplate("sx", TemplateCategory::kMain,
                            "In banking, [TARGET] are seen as [MASK].", Number::kPlural);
  EXPECT_KIND(PerturbAdverbs(t).status(), kAdverbNotFound);
  // "oftentimes" is not the word "often".
  t.text = "In banking, [TARGET] are oftentimes seen as [MASK].";
  EXPECT_KIND(PerturbAdverbs(t).status(), kAdverbNotFound);
}

TEST(PerturbTest, Quantifiers) {
  auto out = PerturbQuantifiers(Seed());
  ASSERT_TRUE(out.ok()) << out.status();
  ASSERT_EQ(out->size(), 2u);
  EXPECT_EQ((*out)[0].text,
            "In terms of financial stability, some of [TARGET] are often seen as [MASK].");
  EXPECT_EQ((*out)[1].text,
            "In terms of financial stability, all [TARGET] are often seen as [MASK].");

  Template initial = MakeTemplate("sy", TemplateCategory::kMain,
                                  "[TARGET] are often seen as [MASK] by banks.",
                                  Number::kPlural);
  auto capital = PerturbQuantifiers(initial);
  ASSERT_TRUE(capital.ok());
  EXPECT_TRUE(absl::StartsWith((*capital)[0].text, "Some of [TARGET]"));
  EXPECT_TRUE(absl::StartsWith((*capital)[1].text, "All [TARGET]"));
}

TEST(GrammarTest, Transforms) {
  const Template seed = Seed();
  auto singular = GrammarTransform(seed, TemplateCategory::kGrammarSingular);
  auto future = GrammarTransform(seed, TemplateCategory::kGrammarFuture);
  auto past = GrammarTransform(seed, TemplateCategory::kGrammarPast);
  auto active = GrammarTransform(seed, TemplateCategory::kGrammarActive);
  ASSERT_TRUE(singular.ok() && future.ok() && past.ok() && active.ok());
  EXPECT_EQ(singular->text,
            "In terms of financial stability, [TARGET] is often seen as [MASK].");
  EXPECT_EQ(singular->number, Number::kSingular);
  EXPECT_EQ(future->text,
            "In terms of financial stability, [TARGET] will often be seen as [MASK].");
  EXPECT_EQ(past->text,
            "In terms of financial stability, [TARGET] were often seen as [MASK].");
  EXPECT_EQ(active->text,
            "In terms of financial stability, [TARGET] often see themselves as [MASK].");
  EXPECT_EQ(future->number, Number::kPlural);
}

TEST(GrammarTest, PossessedSubjectSingular) {
  Template seed = MakeTemplate("sp", TemplateCategory::kMain,
                               "The income of [TARGET] is often seen as [MASK].",
                               Number::kPlural);
  seed.frame = VerbFrame{"", "The income of [TARGET]", "is", "seen as [MASK].",
                         std::nullopt, "income"};
  auto singular = GrammarTransform(seed, TemplateCategory::kGrammarSingular);
  ASSERT_TRUE(singular.ok()) << singular.status();
  EXPECT_EQ(singular->text, "[TARGET]'s income is often seen as [MASK].");
  EXPECT_KIND(GrammarTransform(seed, TemplateCategory::kGrammarActive).status(),
              kTransformationNotApplicable);
}

TEST(GrammarTest, NotApplicableWithoutFrameOrOverride) {
  Template seed = Seed();
  seed.frame->active.reset();
  EXPECT_KIND(PerturbGrammar(seed, {}).status(), kTransformationNotApplicable);
  GrammarOverrides overrides;
  overrides[{seed.seed_id, TemplateCategory::kGrammarActive}] =
      MakeTemplate(seed.seed_id, TemplateCategory::kGrammarActive,
                   "In terms of savings, people often assume [TARGET] to be [MASK].",
                   Number::kPlural);
  auto out = PerturbGrammar(seed, overrides);
  ASSERT_TRUE(out.ok()) << out.status();
  ASSERT_EQ(out->size(), 4u);
  EXPECT_EQ(out->back().text,
            "In terms of savings, people often assume [TARGET] to be [MASK].");
  EXPECT_KIND(GrammarTransform(seed, TemplateCategory::kMain).status(),
              kTransformationNotApplicable);
}

TEST(TemplateSetTest, ShippedCounts) {
  const auto start = std::chrono::steady_clock::now();
  auto set = BuildTemplateSetFromDir(TemplatesDir());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_TRUE(set.ok()) << set.status();
  EXPECT_LT(seconds, 5.0);
  EXPECT_EQ(set->templates.size(), kExpectedTemplateTotal);
  const auto counts = set->CategoryCounts();
  for (TemplateCategory c : kAllCategories) {
    EXPECT_EQ(counts.at(c), ExpectedCount(c)) << CategoryName(c);
  }
  EXPECT_EQ(set->CountNumber(Number::kSingular), 60u);
  EXPECT_EQ(set->CountNumber(Number::kPlural), 783u);
  EXPECT_TRUE(set->warnings.empty());
  std::set<std::string> ids;
  for (const Template& t : set->templates) {
    EXPECT_TRUE(ValidateTemplate(t.text).ok()) << t.text;
    EXPECT_TRUE(ids.insert(t.id).second);
  }
}

TEST(TemplateSetTest, SerializationIsDeterministic) {
  auto a = BuildTemplateSetFromDir(TemplatesDir());
  auto b = BuildTemplateSetFromDir(TemplatesDir());
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->Serialize(), b->Serialize());
  EXPECT_EQ(a->Manifest().at("total"), 843);
}

TEST(TemplateSetTest, MissingCuratedFileIsWarning) {
  TempDir dir;
  std::filesystem::copy(TemplatesDir(), dir.path(),
                        std::filesystem::copy_options::recursive);
  std::filesystem::remove(dir / "curated/structural_short.jsonl");
  auto set = BuildTemplateSetFromDir(dir.path());
  ASSERT_TRUE(set.ok()) << set.status();
  EXPECT_EQ(set->templates.size(), kExpectedTemplateTotal - 21);
  ASSERT_EQ(set->warnings.size(), 1u);
  EXPECT_TRUE(absl::StrContains(set->warnings[0], "CountMismatch"));
}

TEST(TemplateSetTest, CuratedCountMismatch) {
  TempDir dir;
  WriteText(dir / "short.jsonl",
            R"({"seed_id": "s01", "category": "structural_short", "text": "Banks see [TARGET] as [MASK].", "number": "plural"})"
            "\n");
  auto out = LoadCurated(dir / "short.jsonl", TemplateCategory::kStructuralShort, 21);
  EXPECT_KIND(out.status(), kCountMismatch);
  auto unchecked = LoadCurated(dir / "short.jsonl", TemplateCategory::kStructuralShort);
  ASSERT_TRUE(unchecked.ok()) << unchecked.status();
  EXPECT_EQ(unchecked->size(), 1u);
}

TEST(TemplateSetTest, InvalidCuratedTemplate) {
  TempDir dir;
  WriteText(dir / "short.jsonl",
            R"({"seed_id": "s01", "category": "structural_short", "text": "Banks see [TARGET] as rich.", "number": "plural"})"
            "\n");
  EXPECT_KIND(LoadCurated(dir / "short.jsonl", TemplateCategory::kStructuralShort).status(),
              kValidationFailure);
}

class FakeParaphraser : public ParaphraseProvider {
 public:
  absl::StatusOr<std::vector<std::string>> Paraphrase(const Template&, int k) override {
    std::vector<std::string> out = {"Lenders view [TARGET] as [MASK].",
                                    "broken paraphrase without slots",
                                    "In banking, [TARGET] is [MASK] by reputation."};
    out.resize(std::min<size_t>(out.size(), k));
    return out;
  }
};

TEST(ParaphraseTest, KeepsOnlyValidCandidates) {
  FakeParaphraser provider;
  auto out = GenerateParaphrases({Seed()}, provider, 3);
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->size(), 2u);
  EXPECT_EQ((*out)[0].category, TemplateCategory::kSemanticParaphrase);
  EXPECT_EQ((*out)[0].number, Number::kPlural);
  EXPECT_EQ((*out)[1].number, Number::kSingular);
}

}  // namespace
}  // namespace soceval
