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


#include "soceval/run_config.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "soceval/status.h"
#include "test_util.h"

namespace soceval {
namespace {

using ::soceval::testing::MakeTestPrompt;
using ::soceval::testing::TempDir;
using ::soceval::testing::WriteText;

TEST(RunConfigTest, JsonRoundTripAndUnknownKeys) {
  auto config = RunConfig::FromJson(Json::parse(R"({
    "lexicon": "lex", "templates": "tpl", "out": "o", "scorer": "random",
    "seed": 42, "policy": "micro", "els_normalizer": false, "concurrency": 3,
    "mode": "masked", "names_all_templates": false, "slice": "limit=5"
  })"));
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->seed, 42u);
  EXPECT_EQ(config->policy, Policy::kMicro);
  EXPECT_FALSE(config->els_normalizer);
  EXPECT_FALSE(config->names_all_templates);
  EXPECT_EQ(config->concurrency, 3);
  auto back = RunConfig::FromJson(config->ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->ToJson(), config->ToJson());

  EXPECT_KIND(RunConfig::FromJson(Json::parse(R"({"lexicon": "x", "bogus": 1})")).status(),
              kInvalidConfig);
  EXPECT_KIND(RunConfig::FromJson(Json::parse(R"({"policy": "median"})")).status(),
              kInvalidConfig);
  EXPECT_KIND(RunConfig::FromJson(Json::parse(R"({"seed": "abc"})")).status(),
              kInvalidConfig);
  EXPECT_KIND(RunConfig::FromJson(Json::parse("[]")).status(), kInvalidConfig);
}

TEST(RunConfigTest, DefaultsAndFinalize) {
  RunConfig config;
  EXPECT_TRUE(config.names_all_templates);
  EXPECT_EQ(config.policy, Policy::kMacro);
  EXPECT_KIND(config.Finalize(), kInvalidConfig);
  config.lexicon_dir = "lex";
  config.templates_dir = "tpl";
  config.out_dir = "o";
  ASSERT_TRUE(config.Finalize().ok());
  EXPECT_EQ(config.irrelevant_path, std::filesystem::path("lex/irrelevant.jsonl"));
  EXPECT_EQ(config.corpus_path, std::filesystem::path("o/corpus.jsonl"));
  EXPECT_EQ(config.store_path, std::filesystem::path("o/scores.jsonl"));
  config.concurrency = 0;
  EXPECT_KIND(config.Finalize(), kInvalidConfig);
  config.concurrency = 1;
  config.slice = "colour=red";
  EXPECT_KIND(config.Finalize(), kInvalidConfig);
}

TEST(RunConfigTest, LoadFromFile) {
  TempDir dir;
  WriteText(dir / "c.json", R"({"scorer": "ideal", "seed": 7})");
  auto config = LoadRunConfig(dir / "c.json");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->seed, 7u);
  WriteText(dir / "bad.json", "{");
  EXPECT_KIND(LoadRunConfig(dir / "bad.json").status(), kMalformedFile);
}

TEST(SliceTest, ParseAndApply) {
  auto slice = ParseSlice("domain=gender|race, term=gender.men ,limit=2");
  ASSERT_TRUE(slice.ok()) << slice.status();
  EXPECT_EQ(slice->domains, (std::set<std::string>{"gender", "race"}));
  EXPECT_EQ(slice->terms, (std::set<std::string>{"gender.men"}));
  EXPECT_EQ(slice->limit, 2u);
  EXPECT_TRUE(ParseSlice("")->empty());
  EXPECT_KIND(ParseSlice("limit=x").status(), kInvalidConfig);
  EXPECT_KIND(ParseSlice("domain=").status(), kInvalidConfig);
  EXPECT_KIND(ParseSlice("shape=round").status(), kInvalidConfig);

  std::vector<Prompt> prompts = {
      MakeTestPrompt("d", "gender.men", "gender", {"male"}),
      MakeTestPrompt("a", "gender.men", "gender", {"male"}),
      MakeTestPrompt("c", "gender.women", "gender", {"female"}),
      MakeTestPrompt("b", "gender.men", "gender", {"male"}),
      MakeTestPrompt("e", "race.white", "race", {"White"})};
  const auto out = ApplySlice(prompts, *slice);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].prompt_id, "a");
  EXPECT_EQ(out[1].prompt_id, "b");
  EXPECT_EQ(ApplySlice(prompts, *ParseSlice("template=t0")).size(), 5u);
  EXPECT_EQ(ApplySlice(prompts, *ParseSlice("template=t1")).size(), 0u);
}

TEST(MakeScorerTest, Kinds) {
  TempDir dir;
  RunConfig config;
  config.scorer = "ideal";
  EXPECT_EQ((*MakeScorer(config)).scorer->id(), "ideal_lm");
  config.scorer = "random";
  config.seed = 9;
  EXPECT_EQ((*MakeScorer(config)).scorer->id(), "random_lm_9");
  config.scorer = "full-bias-rich";
  EXPECT_EQ((*MakeScorer(config)).scorer->id(), "full_bias_lm_rich");

  WriteText(dir / "w.json", R"({"class": {"poor": 2}})");
  config.scorer = "table:" + (dir / "w.json").string();
  EXPECT_EQ((*MakeScorer(config)).scorer->id(), "table_lm");
  config.scorer_id = "custom";
  EXPECT_EQ((*MakeScorer(config)).scorer->id(), "custom");
  config.scorer_id.clear();

  WriteText(dir / "stub.json", R"({"poor": 0.5})");
  config.scorer = "stub:" + (dir / "stub.json").string();
  auto stub = MakeScorer(config);
  ASSERT_TRUE(stub.ok()) << stub.status();
  EXPECT_EQ(stub->scorer->id(), "stub_masked");
  EXPECT_NE(stub->backend, nullptr);

  config.scorer = "http";
  EXPECT_KIND(MakeScorer(config).status(), kInvalidConfig);
  config.endpoint = "http://127.0.0.1:1";
  config.mode = ScoringMode::kCausal;
  auto http = MakeScorer(config);
  ASSERT_TRUE(http.ok()) << http.status();
  EXPECT_EQ(http->scorer->id(), "http_causal");

  config.scorer = "ideal";
  EXPECT_KIND(MakeScorer(config).status(), kInvalidConfig);
  config.mode = ScoringMode::kMasked;
  config.scorer = "oracle";
  EXPECT_KIND(MakeScorer(config).status(), kInvalidConfig);
  EXPECT_KIND(MakeBackend(config).status(), kInvalidConfig);
}

}  // namespace
}  // namespace soceval
