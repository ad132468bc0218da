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

// Expansion of templates x target terms into masked prompts, candidate fill
// instantiation, and the JSON Lines corpus file.

#ifndef SOCEVAL_CORPUS_H_
#define SOCEVAL_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "soceval/io.h"
#include "soceval/lexicon.h"
#include "soceval/templates.h"

namespace soceval {

struct Prompt {
  std::string prompt_id;
  std::string template_id;
  std::string term_id;
  std::string text_masked;
  Number number_agreement = Number::kPlural;
  // Copied from the term: its domain key and subgroup labels.
  std::string domain;
  std::vector<std::string> subgroups;

  Json ToJson() const;
  static absl::StatusOr<Prompt> FromJson(const Json& json);
};

// 32 hex digits of SHA-256 over template_id, a 0x1f separator, and term_id.
std::string PromptId(absl::string_view template_id, absl::string_view term_id);

struct CorpusOptions {
  // Names normally only fill singular-agreement templates; true pairs them
  // with every template (the literal template x term product).
  bool names_all_templates = false;
};

// True when `term` is paired with `tmpl` under `options`.
bool Pairs(const Template& tmpl, const Term& term, const CorpusOptions& options);

// The prompt for one (template, term) pair. MissingSurfaceForm when the term
// lacks the surface the template's number requires.
absl::StatusOr<Prompt> Instantiate(const Template& tmpl, const Term& term);

// Number of prompts Expand yields.
size_t ExpectedPromptCount(std::span<const Template> templates,
                           std::span<const Term> terms,
                           const CorpusOptions& options);

using PromptCallback = std::function<absl::Status(const Prompt&)>;

// Streams every prompt, templates outer and terms inner, in input order.
absl::Status Expand(std::span<const Template> templates,
                    std::span<const Term> terms, const CorpusOptions& options,
                    const PromptCallback& fn);

struct CandidateFill {
  std::string prompt_id;
  std::string fill_id;
  std::string surface;
  std::string filled_text;
  FillClass fill_class = FillClass::kIrrelevant;
};

// One candidate per fill, [MASK] replaced by the fill surface.
std::vector<CandidateFill> InstantiateFills(const Prompt& prompt,
                                            std::span<const FillWord> fills);

struct CorpusSummary {
  size_t prompts = 0;
  std::string sha256;
};

// Writes the expansion sorted by prompt_id without holding the prompt texts
// in memory. Output is gzip-compressed when `path` ends in ".gz".
absl::StatusOr<CorpusSummary> WriteCorpus(std::span<const Template> templates,
                                          std::span<const Term> terms,
                                          const CorpusOptions& options,
                                          const std::filesystem::path& path);

// Writes already-materialized prompts, sorted by prompt_id.
absl::StatusOr<CorpusSummary> WritePrompts(std::vector<Prompt> prompts,
                                           const std::filesystem::path& path);

// Streams a corpus file. A malformed or truncated line is a MalformedFile
// error naming the line.
absl::Status ReadCorpus(const std::filesystem::path& path,
                        const PromptCallback& fn);

absl::StatusOr<std::vector<Prompt>> ReadAllPrompts(
    const std::filesystem::path& path);

}  // namespace soceval

#endif  // SOCEVAL_CORPUS_H_
