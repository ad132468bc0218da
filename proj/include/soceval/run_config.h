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

// Pipeline run configuration, prompt slicing, and scorer construction.

#ifndef SOCEVAL_RUN_CONFIG_H_
#define SOCEVAL_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "soceval/corpus.h"
#include "soceval/io.h"
#include "soceval/metrics.h"
#include "soceval/scorer.h"

namespace soceval {

struct RunConfig {
  std::filesystem::path lexicon_dir;
  std::filesystem::path templates_dir;
  // Defaults to <irrelevant set in lexicon_dir>.
  std::filesystem::path irrelevant_path;
  std::filesystem::path out_dir = "out";
  // Default to <out_dir>/corpus.jsonl and <out_dir>/scores.jsonl.
  std::filesystem::path corpus_path;
  std::filesystem::path store_path;

  // "ideal", "random", "full-bias-poor", "full-bias-rich", "table:<file>",
  // "stub:<file>" or "http".
  std::string scorer = "ideal";
  // Overrides the derived scorer id.
  std::string scorer_id;
  ScoringMode mode = ScoringMode::kMasked;
  std::string endpoint;
  int concurrency = 1;
  int timeout_ms = 30000;
  int retry_attempts = 5;
  int retry_backoff_ms = 200;

  Policy policy = Policy::kMacro;
  bool els_normalizer = true;
  // The command line reproduces the literal template x term product by
  // default; false restricts names to singular-agreement templates.
  bool names_all_templates = true;
  uint64_t seed = 0;
  std::string slice;

  // Unknown keys are InvalidConfig.
  static absl::StatusOr<RunConfig> FromJson(const Json& json);
  Json ToJson() const;

  // Fills derived paths and validates values.
  absl::Status Finalize();

  MetricOptions metric_options() const { return {policy, els_normalizer}; }
};

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path);

// Prompt subset: "domain=gender|neutral,term=race.white,limit=100".
// Keys: domain (prompt domain key), term (term id), template (template id),
// limit (first N prompts in prompt_id order after the other filters).
struct Slice {
  std::set<std::string> domains;
  std::set<std::string> terms;
  std::set<std::string> templates;
  std::optional<size_t> limit;

  bool empty() const {
    return domains.empty() && terms.empty() && templates.empty() && !limit;
  }
  bool Matches(const Prompt& prompt) const;
};

absl::StatusOr<Slice> ParseSlice(absl::string_view expr);

// Filters then sorts by prompt_id and truncates to the limit.
std::vector<Prompt> ApplySlice(std::vector<Prompt> prompts, const Slice& slice);

// A scorer plus the backend it borrows, if any.
struct ScorerBundle {
  std::unique_ptr<Backend> backend;
  std::unique_ptr<Scorer> scorer;
};

absl::StatusOr<ScorerBundle> MakeScorer(const RunConfig& config);

// The wire backend for "http" and "stub:<file>" scorers. InvalidConfig for
// analytic scorers.
absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const RunConfig& config);

}  // namespace soceval

#endif  // SOCEVAL_RUN_CONFIG_H_
