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


#include "soceval/score_store.h"

#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "soceval/status.h"
#include "test_util.h"

namespace soceval {
namespace {

using ::soceval::testing::MakeTestPrompt;
using ::soceval::testing::ReadText;
using ::soceval::testing::SyntheticFills;
using ::soceval::testing::TempDir;
using ::soceval::testing::WriteText;

ChoiceScore Score(const std::string& prompt, const std::string& fill, double lp,
                  const std::string& scorer = "s") {
  ChoiceScore s;
  s.prompt_id = prompt;
  s.fill_id = fill;
  s.logprob = lp;
  s.sum_logprob = lp;
  s.scorer_id = scorer;
  s.model_id = scorer;
  s.reduction = "analytic";
  return s;
}

std::vector<Prompt> Prompts(int n) {
  std::vector<Prompt> out;
  for (int i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "p%03d", i);
    out.push_back(MakeTestPrompt(id));
  }
  return out;
}

TEST(StoreLineTest, EncodeDecode) {
  const ChoiceScore s = Score("p", "poor.poor", -0.5);
  const std::string line = EncodeStoreLine(s);
  const Json j = Json::parse(line);
  EXPECT_EQ(j.at("crc").get<std::string>().size(), 8u);
  auto back = DecodeStoreLine(line);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, s);
}

TEST(StoreLineTest, DetectsCorruption) {
  std::string line = EncodeStoreLine(Score("p", "poor.poor", -0.5));
  const size_t pos = line.find("-0.5");
  ASSERT_NE(pos, std::string::npos);
  line[pos + 3] = '7';
  EXPECT_KIND(DecodeStoreLine(line).status(), kStoreCorrupt);
  EXPECT_KIND(DecodeStoreLine("{not json").status(), kStoreCorrupt);
}

TEST(ScoreStoreTest, PersistsAcrossOpens) {
  TempDir dir;
  {
    auto store = ScoreStore::Open(dir / "s.jsonl");
    ASSERT_TRUE(store.ok()) << store.status();
    ASSERT_TRUE((*store)->Put(Score("p1", "f1", -1.0)).ok());
    ASSERT_TRUE((*store)->Put(Score("p1", "f2", -2.0)).ok());
    ASSERT_TRUE((*store)->Put(Score("p1", "f1", -1.0, "other")).ok());
    EXPECT_EQ((*store)->size(), 3u);
  }
  auto store = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(store.ok());
  EXPECT_EQ((*store)->size(), 3u);
  EXPECT_EQ((*store)->appended(), 0u);
  auto got = (*store)->Get("s", "p1", "f2");
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->logprob, -2.0);
  EXPECT_FALSE((*store)->Get("s", "p2", "f1").has_value());
  EXPECT_EQ((*store)->ScorerIds(), (std::vector<std::string>{"other", "s"}));
}

TEST(ScoreStoreTest, IdenticalRecordNotRewritten) {
  TempDir dir;
  auto store = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(store.ok());
  ASSERT_TRUE((*store)->Put(Score("p1", "f1", -1.0)).ok());
  const std::string before = ReadText(dir / "s.jsonl");
  ASSERT_TRUE((*store)->Put(Score("p1", "f1", -1.0)).ok());
  ASSERT_TRUE((*store)->Flush().ok());
  EXPECT_EQ(ReadText(dir / "s.jsonl"), before);
  EXPECT_EQ((*store)->appended(), 1u);

  // A differing record wins.
  ASSERT_TRUE((*store)->Put(Score("p1", "f1", -3.0)).ok());
  EXPECT_EQ((*store)->Get("s", "p1", "f1")->logprob, -3.0);
  EXPECT_EQ((*store)->size(), 1u);
}

TEST(ScoreStoreTest, TornTailTruncated) {
  TempDir dir;
  const std::string good = EncodeStoreLine(Score("p1", "f1", -1.0));
  const std::string torn = EncodeStoreLine(Score("p1", "f2", -2.0)).substr(0, 20);
  WriteText(dir / "s.jsonl", good + "\n" + torn);
  {
    auto store = ScoreStore::Open(dir / "s.jsonl");
    ASSERT_TRUE(store.ok()) << store.status();
    EXPECT_EQ((*store)->size(), 1u);
    EXPECT_EQ(ReadText(dir / "s.jsonl"), good + "\n");
    ASSERT_TRUE((*store)->Put(Score("p1", "f2", -2.0)).ok());
  }
  auto store = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(store.ok()) << store.status();
  EXPECT_EQ((*store)->size(), 2u);
}

TEST(ScoreStoreTest, CorruptCompleteLineIsError) {
  TempDir dir;
  std::string line = EncodeStoreLine(Score("p1", "f1", -1.0));
  line.replace(line.find("\"crc\":\"") + 7, 8, "00000000");
  WriteText(dir / "s.jsonl", line + "\n");
  auto store = ScoreStore::Open(dir / "s.jsonl");
  EXPECT_KIND(store.status(), kStoreCorrupt);
  EXPECT_NE(std::string(store.status().message()).find(":1:"), std::string::npos);
}

TEST(ScoreStoreTest, MissingAndRecordsOrder) {
  TempDir dir;
  auto store = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(store.ok());
  const auto prompts = Prompts(3);
  const auto fills = SyntheticFills(2);
  EXPECT_EQ((*store)->Missing(prompts, fills, "s").size(), 3u * fills.size());
  ASSERT_TRUE((*store)->Put(Score("p001", fills[1].id, -1.0)).ok());
  ASSERT_TRUE((*store)->Put(Score("p000", fills[0].id, -1.0)).ok());
  const auto missing = (*store)->Missing(prompts, fills, "s");
  EXPECT_EQ(missing.size(), 3u * fills.size() - 2);
  EXPECT_EQ(missing.front(), (MissingWork{"p000", fills[1].id}));
  const auto records = (*store)->Records("s");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].prompt_id, "p000");
  EXPECT_EQ(records[1].prompt_id, "p001");
  EXPECT_EQ((*store)->Missing(prompts, fills, "other").size(), 3u * fills.size());
}

TEST(ScoreStoreTest, ConcurrentPutsAllLand) {
  TempDir dir;
  {
    auto store = ScoreStore::Open(dir / "s.jsonl");
    ASSERT_TRUE(store.ok());
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 250; ++i) {
          EXPECT_TRUE((*store)
                          ->Put(Score("p" + std::to_string(t), "f" + std::to_string(i),
                                      -1.0 * i))
                          .ok());
        }
      });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ((*store)->size(), 1000u);
  }
  auto reopened = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(reopened.ok()) << reopened.status();
  EXPECT_EQ((*reopened)->size(), 1000u);
}

TEST(RunScoringTest, ResumeAfterInterruptionMatchesSingleRun) {
  const auto prompts = Prompts(20);
  const auto fills = SyntheticFills();
  auto scorer = MakeRandomLm(3);
  TempDir dir;

  auto reference = ScoreStore::Open(dir / "ref.jsonl");
  ASSERT_TRUE(reference.ok());
  auto full = RunScoring(*scorer, prompts, fills, **reference);
  ASSERT_TRUE(full.ok()) << full.status();
  EXPECT_EQ(full->prompts_scored, 20u);
  ASSERT_TRUE(WriteCanonicalStore(**reference, scorer->id(), dir / "ref.canon").ok());

  {
    auto partial = ScoreStore::Open(dir / "run.jsonl");
    ASSERT_TRUE(partial.ok());
    RunOptions stop;
    stop.stop_after_prompts = 6;
    auto first = RunScoring(*scorer, prompts, fills, **partial, stop);
    ASSERT_TRUE(first.ok());
    EXPECT_EQ(first->prompts_scored, 6u);
    EXPECT_EQ((*partial)->Missing(prompts, fills, scorer->id()).size(),
              14u * fills.size());
  }
  auto resumed = ScoreStore::Open(dir / "run.jsonl");
  ASSERT_TRUE(resumed.ok());
  RunOptions parallel;
  parallel.max_concurrency = 4;
  size_t progress_calls = 0;
  parallel.progress = [&](size_t, size_t) { ++progress_calls; };
  auto second = RunScoring(*scorer, prompts, fills, **resumed, parallel);
  ASSERT_TRUE(second.ok()) << second.status();
  EXPECT_EQ(second->prompts_already_complete, 6u);
  EXPECT_EQ(second->prompts_scored, 14u);
  EXPECT_EQ(progress_calls, 14u);
  ASSERT_TRUE(WriteCanonicalStore(**resumed, scorer->id(), dir / "run.canon").ok());
  EXPECT_EQ(ReadText(dir / "run.canon"), ReadText(dir / "ref.canon"));

  // A third pass has nothing to do.
  auto third = RunScoring(*scorer, prompts, fills, **resumed);
  ASSERT_TRUE(third.ok());
  EXPECT_EQ(third->prompts_scored, 0u);
}

TEST(RunScoringTest, FirstErrorStopsRun) {
  StubBackend stub({}, "m");
  BackendScorer scorer(stub, ScoringMode::kMasked, "stub");
  TempDir dir;
  auto store = ScoreStore::Open(dir / "s.jsonl");
  ASSERT_TRUE(store.ok());
  auto r = RunScoring(scorer, Prompts(3), SyntheticFills(1), **store);
  EXPECT_KIND(r.status(), kChoiceNotScorable);
}

}  // namespace
}  // namespace soceval
