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

// End-to-end pipeline steps behind the command-line subcommands. Each step
// reads its inputs from a finalized RunConfig and writes under its out_dir:
//
//   templates.jsonl, gen_manifest.json, corpus.jsonl   (gen)
//   scores.jsonl                                       (score)
//   analysis.json                                      (analyze)
//   report/                                            (report)
//   probe_gender.json, probe_race.json                 (probe-names)
//   reasoning.jsonl                                    (reasoning-probe)

#ifndef SOCEVAL_PIPELINE_H_
#define SOCEVAL_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "soceval/analysis.h"
#include "soceval/corpus.h"
#include "soceval/lexicon.h"
#include "soceval/run_config.h"
#include "soceval/score_store.h"
#include "soceval/templates.h"

namespace soceval {

struct PipelineInputs {
  Lexicon lexicon;
  std::vector<Term> terms;
  // Poor and rich fills, then the irrelevant set.
  std::vector<FillWord> fills;
};

absl::StatusOr<PipelineInputs> LoadInputs(const RunConfig& config);

struct GenResult {
  TemplateSet templates;
  CorpusSummary corpus;
  Json manifest;
};

// Builds the template set and writes the corpus. CountMismatch when a
// category count differs from the expected one.
absl::StatusOr<GenResult> RunGen(const RunConfig& config);

// Validates every shipped template (or the records of `input`, JSON Lines
// with a "text" field) and the lexicon. The returned document lists
// violations and warnings; `ok` is false when any violation exists.
absl::StatusOr<Json> RunValidate(const RunConfig& config,
                                 const std::optional<std::filesystem::path>& input);

struct ScoreResult {
  std::string scorer_id;
  size_t prompts = 0;
  size_t missing_before = 0;
  RunSummary summary;
};

// Scores the (sliced) corpus into the store, skipping complete prompts.
absl::StatusOr<ScoreResult> RunScore(const RunConfig& config,
                                     const RunOptions& options = {});

// Analyzes every scorer in the store (or only `scorer_id`) over the scored
// prompts of the (sliced) corpus and writes analysis.json.
absl::StatusOr<Json> RunAnalyze(const RunConfig& config,
                                const std::optional<std::string>& scorer_id = {});

// Renders analysis.json and any probe files into out_dir/report.
absl::Status RunReport(const RunConfig& config);

absl::StatusOr<std::vector<ProbeSummary>> RunProbeNames(
    const RunConfig& config, const std::vector<ProbeAttribute>& attributes,
    const ProbeOptions& options = {});

// Dispatches the reasoning prompts of analysis.json with five consecutive
// seeds starting at config.seed and writes reasoning.jsonl.
absl::StatusOr<std::vector<ReasoningRecord>> RunReasoning(const RunConfig& config,
                                                          int max_tokens = 64);

}  // namespace soceval

#endif  // SOCEVAL_PIPELINE_H_
