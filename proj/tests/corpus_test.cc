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


#include "soceval/corpus.h"

#include <algorithm>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "soceval/status.h"
#include "test_util.h"

namespace soceval {
namespace {

using ::soceval::testing::LexiconDir;
using ::soceval::testing::ReadText;
using ::soceval::testing::TemplatesDir;
using ::soceval::testing::TempDir;

Term PluralTerm() {
  Term t;
  t.id = "race.white";
  t.surface_plural = "White people";
  t.surface_singular = "White person";
  t.domain = Domain::kRace;
  t.subgroups = {"White"};
  return t;
}

Template PluralTemplate() {
  return MakeTemplate("s02", TemplateCategory::kMain,
                      "In the property market, [TARGET] are often seen as [MASK].",
                      Number::kPlural);
}

TEST(InstantiateTest, FillsTargetAndCopiesKeys) {
  auto p = Instantiate(PluralTemplate(), PluralTerm());
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->text_masked, "In the property market, White people are often seen as [MASK].");
  EXPECT_EQ(p->prompt_id, PromptId(PluralTemplate().id, "race.white"));
  EXPECT_EQ(p->prompt_id.size(), 32u);
  EXPECT_EQ(p->domain, "race");
  EXPECT_EQ(p->subgroups, (std::vector<std::string>{"White"}));
  EXPECT_EQ(p->number_agreement, Number::kPlural);
}

TEST(InstantiateTest, SingularUsesSingularSurface) {
  Template t = MakeTemplate("s02", TemplateCategory::kGrammarSingular,
                            "In the property market, [TARGET] is often seen as [MASK].",
                            Number::kSingular);
  auto p = Instantiate(t, PluralTerm());
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->text_masked, "In the property market, White person is often seen as [MASK].");
}

TEST(InstantiateTest, SentenceInitialSlotCapitalized) {
  Template t = MakeTemplate("sx", TemplateCategory::kStructuralShort,
                            "[TARGET] are often seen as [MASK] by lenders.", Number::kPlural);
  Term they;
  they.id = "neutral.they";
  they.surface_plural = "they";
  they.surface_singular = "this person";
  they.domain = Domain::kNeutral;
  they.subgroups = {"neutral"};
  auto p = Instantiate(t, they);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->text_masked, "They are often seen as [MASK] by lenders.");
}

TEST(InstantiateTest, MissingSurface) {
  Term t = PluralTerm();
  t.surface_plural.clear();
  EXPECT_KIND(Instantiate(PluralTemplate(), t).status(), kMissingSurfaceForm);
}

TEST(PromptJsonTest, RoundTrip) {
  auto p = Instantiate(PluralTemplate(), PluralTerm());
  ASSERT_TRUE(p.ok());
  auto back = Prompt::FromJson(p->ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->ToJson(), p->ToJson());
  EXPECT_KIND(Prompt::FromJson(Json{{"prompt_id", "x"}}).status(), kMalformedFile);
}

TEST(PairsTest, NamesOnlyOnSingularByDefault) {
  NameEntry anne{"Anne", GenderLabel::kFemale, RaceLabel::kWhite, false};
  const Term name = anne.AsTerm();
  Template plural = PluralTemplate();
  Template singular = plural;
  singular.number = Number::kSingular;
  EXPECT_FALSE(Pairs(plural, name, {}));
  EXPECT_TRUE(Pairs(singular, name, {}));
  EXPECT_TRUE(Pairs(plural, name, {.names_all_templates = true}));
  EXPECT_TRUE(Pairs(plural, PluralTerm(), {}));
}

TEST(InstantiateFillsTest, OneCandidatePerFill) {
  auto p = Instantiate(PluralTemplate(), PluralTerm());
  ASSERT_TRUE(p.ok());
  const std::vector<FillWord> fills = {{"poor.poor", "poor", FillClass::kPoor},
                                       {"rich.rich", "rich", FillClass::kRich}};
  const auto out = InstantiateFills(*p, fills);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].filled_text, "In the property market, White people are often seen as poor.");
  EXPECT_EQ(out[1].fill_id, "rich.rich");
  EXPECT_EQ(out[1].fill_class, FillClass::kRich);
  EXPECT_EQ(out[1].prompt_id, p->prompt_id);
}

class ShippedCorpusTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto lexicon = LoadLexicon(LexiconDir());
    ASSERT_TRUE(lexicon.ok());
    auto terms = TargetTerms(*lexicon);
    ASSERT_TRUE(terms.ok());
    terms_ = new std::vector<Term>(*std::move(terms));
    auto set = BuildTemplateSetFromDir(TemplatesDir());
    ASSERT_TRUE(set.ok());
    templates_ = new std::vector<Template>(set->templates);
  }
  static void TearDownTestSuite() {
    delete terms_;
    delete templates_;
  }
  static std::vector<Term>* terms_;
  static std::vector<Template>* templates_;
};
std::vector<Term>* ShippedCorpusTest::terms_ = nullptr;
std::vector<Template>* ShippedCorpusTest::templates_ = nullptr;

TEST_F(ShippedCorpusTest, PromptCounts) {
  EXPECT_EQ(ExpectedPromptCount(*templates_, *terms_, {.names_all_templates = true}),
            843u * 1135u);
  EXPECT_EQ(ExpectedPromptCount(*templates_, *terms_, {}), 843u * 1047u + 60u * 88u);
}

TEST_F(ShippedCorpusTest, EveryPairInstantiates) {
  size_t n = 0;
  ASSERT_TRUE(Expand(*templates_, *terms_, {}, [&](const Prompt& p) {
                EXPECT_EQ(p.text_masked.find("[TARGET]"), std::string::npos);
                ++n;
                return absl::OkStatus();
              }).ok());
  EXPECT_EQ(n, 887901u);
}

TEST_F(ShippedCorpusTest, WriteReadSortedAndDeterministic) {
  // A slice of templates keeps the file small.
  std::vector<Template> some(templates_->begin(), templates_->begin() + 12);
  TempDir dir;
  auto a = WriteCorpus(some, *terms_, {}, dir / "a.jsonl");
  auto b = WriteCorpus(some, *terms_, {}, dir / "b.jsonl");
  ASSERT_TRUE(a.ok() && b.ok()) << a.status();
  EXPECT_EQ(a->prompts, ExpectedPromptCount(some, *terms_, {}));
  EXPECT_EQ(a->sha256, b->sha256);
  EXPECT_EQ(ReadText(dir / "a.jsonl"), ReadText(dir / "b.jsonl"));

  auto prompts = ReadAllPrompts(dir / "a.jsonl");
  ASSERT_TRUE(prompts.ok());
  ASSERT_EQ(prompts->size(), a->prompts);
  EXPECT_TRUE(std::is_sorted(prompts->begin(), prompts->end(),
                             [](const Prompt& x, const Prompt& y) {
                               return x.prompt_id < y.prompt_id;
                             }));

  // Rewriting the read prompts in shuffled order gives the same bytes.
  std::vector<Prompt> shuffled = *prompts;
  std::reverse(shuffled.begin(), shuffled.end());
  auto c = WritePrompts(shuffled, dir / "c.jsonl");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->sha256, a->sha256);
}

}  // namespace
}  // namespace soceval
