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


#include "soceval/scorer.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "soceval/status.h"
#include "test_util.h"

namespace soceval {
namespace {

using ::soceval::testing::MakeTestPrompt;
using ::soceval::testing::SyntheticFills;

double ClassMass(const std::vector<ChoiceScore>& scores,
                 const std::vector<FillWord>& fills, FillClass c) {
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (fills[i].fill_class == c) total += std::exp(scores[i].logprob);
  }
  return total;
}

TEST(ScoringModeTest, Parse) {
  EXPECT_EQ(*ParseScoringMode("masked"), ScoringMode::kMasked);
  EXPECT_EQ(*ParseScoringMode("causal"), ScoringMode::kCausal);
  EXPECT_KIND(ParseScoringMode("other").status(), kInvalidConfig);
}

TEST(ChoiceScoreTest, JsonRoundTripIncludingNegativeInfinity) {
  ChoiceScore s{"p1", "poor.poor", -1.25, -2.5, 2, ScoringMode::kCausal,
                "sc", "model", "mean_token_logprob"};
  auto back = ChoiceScore::FromJson(s.ToJson());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, s);

  s.logprob = -std::numeric_limits<double>::infinity();
  s.sum_logprob = s.logprob;
  const Json j = s.ToJson();
  EXPECT_TRUE(j.at("logprob").is_null());
  back = ChoiceScore::FromJson(j);
  ASSERT_TRUE(back.ok());
  EXPECT_TRUE(std::isinf(back->logprob) && back->logprob < 0);
}

TEST(SyntheticScorerTest, IdealSplitsRelevantMassEvenly) {
  auto scorer = MakeIdealLm();
  EXPECT_EQ(scorer->id(), "ideal_lm");
  const auto fills = SyntheticFills();
  auto scores = scorer->ScoreMasked(MakeTestPrompt("p"), fills);
  ASSERT_TRUE(scores.ok());
  ASSERT_EQ(scores->size(), fills.size());
  EXPECT_NEAR(ClassMass(*scores, fills, FillClass::kPoor), 0.5, 1e-12);
  EXPECT_NEAR(ClassMass(*scores, fills, FillClass::kRich), 0.5, 1e-12);
  EXPECT_EQ(ClassMass(*scores, fills, FillClass::kIrrelevant), 0.0);
  EXPECT_EQ((*scores)[0].reduction, "analytic");
  EXPECT_EQ((*scores)[0].scorer_id, "ideal_lm");
}

TEST(SyntheticScorerTest, FullBiasPutsAllMassOnOneClass) {
  const auto fills = SyntheticFills();
  for (FillClass c : {FillClass::kPoor, FillClass::kRich}) {
    auto scorer = MakeFullBiasLm(c);
    auto scores = scorer->ScoreMasked(MakeTestPrompt("p"), fills);
    ASSERT_TRUE(scores.ok());
    EXPECT_NEAR(ClassMass(*scores, fills, c), 1.0, 1e-12);
  }
  EXPECT_EQ(MakeFullBiasLm(FillClass::kPoor)->id(), "full_bias_lm_poor");
  EXPECT_EQ(MakeFullBiasLm(FillClass::kRich)->id(), "full_bias_lm_rich");
}

TEST(SyntheticScorerTest, RandomIsDeterministicPerSeed) {
  const auto fills = SyntheticFills();
  auto a = MakeRandomLm(7)->ScoreMasked(MakeTestPrompt("p"), fills);
  auto b = MakeRandomLm(7)->ScoreMasked(MakeTestPrompt("p"), fills);
  auto c = MakeRandomLm(8)->ScoreMasked(MakeTestPrompt("p"), fills);
  auto d = MakeRandomLm(7)->ScoreMasked(MakeTestPrompt("q"), fills);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok() && d.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_NE((*a)[0].logprob, (*c)[0].logprob);
  EXPECT_NE((*a)[0].logprob, (*d)[0].logprob);
  for (const ChoiceScore& s : *a) EXPECT_TRUE(std::isfinite(s.logprob));
  EXPECT_EQ(MakeRandomLm(7)->id(), "random_lm_7");
}

TEST(SyntheticScorerTest, NoSentenceModel) {
  CandidateFill fill{"p", "poor.poor", "poor", "text", FillClass::kPoor};
  EXPECT_KIND(MakeIdealLm()->ScoreCausal(fill).status(), kInvalidConfig);
}

TEST(SyntheticScorerTest, EmptyChoices) {
  auto scores = MakeIdealLm()->ScoreMasked(MakeTestPrompt("p"), {});
  ASSERT_TRUE(scores.ok());
  EXPECT_TRUE(scores->empty());
}

TEST(TableWeightsTest, MassMultipliesSections) {
  auto w = TableWeights::FromJson(Json::parse(R"({
    "class": {"poor": 2, "rich": 1, "irrelevant": 0.5},
    "subgroup": {"female": {"poor": 3}},
    "term": {"gender.women": {"rich": 5}}
  })"));
  ASSERT_TRUE(w.ok()) << w.status();
  const std::vector<std::string> female = {"female"};
  EXPECT_DOUBLE_EQ(w->Mass("gender.women", female, FillClass::kPoor), 6.0);
  EXPECT_DOUBLE_EQ(w->Mass("gender.women", female, FillClass::kRich), 5.0);
  EXPECT_DOUBLE_EQ(w->Mass("gender.girls", female, FillClass::kRich), 1.0);
  EXPECT_DOUBLE_EQ(w->Mass("x", {}, FillClass::kIrrelevant), 0.5);
  auto round = TableWeights::FromJson(w->ToJson());
  ASSERT_TRUE(round.ok());
  EXPECT_EQ(round->ToJson(), w->ToJson());
}

TEST(TableWeightsTest, InvalidWeights) {
  EXPECT_KIND(TableWeights::FromJson(Json::parse(R"({"class": {"poor": 0}})")).status(),
              kInvalidWeights);
  EXPECT_KIND(TableWeights::FromJson(Json::parse(R"({"class": {"poor": -1}})")).status(),
              kInvalidWeights);
  EXPECT_KIND(TableWeights::FromJson(Json::parse(R"({"bogus": {}})")).status(),
              kInvalidWeights);
  EXPECT_KIND(TableWeights::FromJson(Json::parse(R"({"class": {"middle": 1}})")).status(),
              kInvalidWeights);
  TableWeights w;
  w.class_mass[FillClass::kPoor] = -2.0;
  EXPECT_KIND(MakeTableLm(w).status(), kInvalidWeights);
}

TEST(TableLmTest, ScoresFollowWeights) {
  TableWeights w;
  w.class_mass = {{FillClass::kPoor, 3.0}, {FillClass::kRich, 1.0},
                  {FillClass::kIrrelevant, 1.0}};
  auto scorer = MakeTableLm(w, "t");
  ASSERT_TRUE(scorer.ok());
  const auto fills = SyntheticFills();
  auto scores = (*scorer)->ScoreMasked(MakeTestPrompt("p"), fills);
  ASSERT_TRUE(scores.ok());
  // 9*3 poor, 9*1 rich, 18*1 irrelevant out of 54.
  EXPECT_NEAR(ClassMass(*scores, fills, FillClass::kPoor), 27.0 / 54.0, 1e-12);
  EXPECT_NEAR(ClassMass(*scores, fills, FillClass::kRich), 9.0 / 54.0, 1e-12);
}

TEST(StubBackendTest, ChoicesSequenceGenerate) {
  StubBackend stub({{"poor", 0.25}, {"rich", 0.5}, {"are", 0.5}}, "m", 0.1);
  const std::vector<std::string> choices = {"poor", "rich"};
  auto r = stub.ScoreChoices("x [MASK]", choices);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->logprobs[0], std::log(0.25));
  EXPECT_EQ(r->model_id, "m");
  const std::vector<std::string> unknown = {"poor", "zzz"};
  EXPECT_KIND(stub.ScoreChoices("x", unknown).status(), kChoiceNotScorable);

  auto seq = stub.ScoreSequence("they are poor");
  ASSERT_TRUE(seq.ok());
  EXPECT_EQ(seq->n_tokens, 3);
  EXPECT_DOUBLE_EQ(seq->token_logprobs[0], std::log(0.1));

  auto g1 = stub.Generate("p", 8, 1);
  auto g2 = stub.Generate("p", 8, 1);
  auto g3 = stub.Generate("p", 8, 2);
  ASSERT_TRUE(g1.ok() && g2.ok() && g3.ok());
  EXPECT_EQ(g1->text, g2->text);
  EXPECT_NE(g1->text, g3->text);
}

TEST(StubBackendTest, FromJsonRejectsNegative) {
  EXPECT_KIND(StubBackend::FromJson(Json::parse(R"({"a": -1})")).status(), kInvalidWeights);
  EXPECT_KIND(StubBackend::FromJson(Json::parse("[1]")).status(), kInvalidWeights);
  EXPECT_TRUE(StubBackend::FromJson(Json::parse(R"({"a": 0.5})")).ok());
}

TEST(BackendScorerTest, MaskedUsesOneCall) {
  std::map<std::string, double> masses;
  const auto fills = SyntheticFills(2);
  for (const FillWord& f : fills) masses[f.surface] = 0.05;
  StubBackend stub(masses, "stub-model");
  BackendScorer scorer(stub, ScoringMode::kMasked, "stub_masked");
  auto scores = ScorePrompt(scorer, MakeTestPrompt("p"), fills);
  ASSERT_TRUE(scores.ok()) << scores.status();
  ASSERT_EQ(scores->size(), fills.size());
  EXPECT_EQ((*scores)[0].scorer_id, "stub_masked");
  EXPECT_EQ((*scores)[0].model_id, "stub-model");
  EXPECT_EQ((*scores)[0].mode, ScoringMode::kMasked);
  EXPECT_DOUBLE_EQ((*scores)[3].logprob, std::log(0.05));
}

TEST(BackendScorerTest, CausalMeanTokenLogprob) {
  StubBackend stub({{"seen", 0.5}, {"poorword0.", 0.25}}, "m", 0.1);
  BackendScorer scorer(stub, ScoringMode::kCausal, "stub_causal");
  Prompt p = MakeTestPrompt("p");
  p.text_masked = "seen [MASK]";
  const std::vector<FillWord> fills = {{"poor.p0", "poorword0.", FillClass::kPoor}};
  auto scores = ScorePrompt(scorer, p, fills);
  ASSERT_TRUE(scores.ok()) << scores.status();
  ASSERT_EQ(scores->size(), 1u);
  const ChoiceScore& s = (*scores)[0];
  EXPECT_EQ(s.n_tokens, 2);
  EXPECT_DOUBLE_EQ(s.sum_logprob, std::log(0.5) + std::log(0.25));
  EXPECT_DOUBLE_EQ(s.logprob, s.sum_logprob / 2);
  EXPECT_EQ(s.reduction, "mean_token_logprob");
  EXPECT_EQ(s.mode, ScoringMode::kCausal);

  CandidateFill empty{"p", "poor.p0", "", "", FillClass::kPoor};
  EXPECT_KIND(scorer.ScoreCausal(empty).status(), kEmptyText);
  CandidateFill blank{"p", "poor.p0", "", "   ", FillClass::kPoor};
  EXPECT_KIND(scorer.ScoreCausal(blank).status(), kEmptyText);
}

}  // namespace
}  // namespace soceval
