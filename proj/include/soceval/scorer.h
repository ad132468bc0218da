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

// Scoring contract over masked-LM and causal-LM backends plus the analytic
// baseline scorers.
//
// A Backend speaks the model wire protocol (choice logprobs, sequence token
// logprobs, generation). A Scorer turns prompts and candidate fills into
// ChoiceScore records, either through a Backend or analytically.

#ifndef SOCEVAL_SCORER_H_
#define SOCEVAL_SCORER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "soceval/corpus.h"
#include "soceval/io.h"
#include "soceval/lexicon.h"

namespace soceval {

enum class ScoringMode { kMasked, kCausal };

absl::string_view ScoringModeName(ScoringMode mode);
absl::StatusOr<ScoringMode> ParseScoringMode(absl::string_view name);

// One scored candidate fill of one prompt.
//
// Masked mode: `logprob` is the log-probability of the fill in the mask slot
// (always <= 0; -inf for a fill with no mass). Causal mode: `logprob` is the
// mean token log-probability of the filled sentence and `sum_logprob` the
// total over its `n_tokens` tokens.
struct ChoiceScore {
  std::string prompt_id;
  std::string fill_id;
  double logprob = 0.0;
  double sum_logprob = 0.0;
  int n_tokens = 1;
  ScoringMode mode = ScoringMode::kMasked;
  std::string scorer_id;
  std::string model_id;
  // Subtoken handling declared by the backend, e.g. "sum_subtoken_logprobs".
  std::string reduction;

  // Non-finite logprobs serialize as null.
  Json ToJson() const;
  static absl::StatusOr<ChoiceScore> FromJson(const Json& json);

  friend bool operator==(const ChoiceScore&, const ChoiceScore&) = default;
};

// Wire responses.
struct ChoicesResponse {
  std::vector<double> logprobs;
  std::string reduction;
  std::string model_id;
};

struct SequenceResponse {
  std::vector<double> token_logprobs;
  int n_tokens = 0;
  std::string model_id;
};

struct GenerateResponse {
  std::string text;
  std::string model_id;
};

// Model wire protocol. Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  // Log-probabilities of each choice in the [MASK] slot of `text_masked`.
  virtual absl::StatusOr<ChoicesResponse> ScoreChoices(
      absl::string_view text_masked, std::span<const std::string> choices) = 0;
  // Per-token log-probabilities of `text`.
  virtual absl::StatusOr<SequenceResponse> ScoreSequence(
      absl::string_view text) = 0;
  virtual absl::StatusOr<GenerateResponse> Generate(absl::string_view prompt,
                                                    int max_tokens,
                                                    uint64_t seed) = 0;
};

// Deterministic in-process backend defined by a mass table: each choice or
// token is looked up by its surface. A choice missing from the table is
// ChoiceNotScorable; a sequence token missing from it gets `default_mass`.
class StubBackend : public Backend {
 public:
  StubBackend(std::map<std::string, double> masses, std::string model_id,
              double default_mass = 0.01);

  // JSON object mapping surface to mass.
  static absl::StatusOr<std::unique_ptr<StubBackend>> FromJson(
      const Json& json, std::string model_id = "stub");

  absl::StatusOr<ChoicesResponse> ScoreChoices(
      absl::string_view text_masked,
      std::span<const std::string> choices) override;
  absl::StatusOr<SequenceResponse> ScoreSequence(absl::string_view text) override;
  absl::StatusOr<GenerateResponse> Generate(absl::string_view prompt,
                                            int max_tokens,
                                            uint64_t seed) override;

 private:
  std::map<std::string, double> masses_;
  std::string model_id_;
  double default_mass_;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const std::string& id() const = 0;
  virtual ScoringMode mode() const = 0;

  // One score per choice for `prompt`, in choice order. Empty choices give an
  // empty result.
  virtual absl::StatusOr<std::vector<ChoiceScore>> ScoreMasked(
      const Prompt& prompt, std::span<const FillWord> choices) = 0;
  // Mean token log-probability of a filled sentence.
  virtual absl::StatusOr<ChoiceScore> ScoreCausal(
      const CandidateFill& fill) = 0;
};

// Scores every choice of `prompt` in the scorer's mode: one masked request,
// or one causal request per filled sentence.
absl::StatusOr<std::vector<ChoiceScore>> ScorePrompt(
    Scorer& scorer, const Prompt& prompt, std::span<const FillWord> choices);

// Scorer over a wire-protocol backend.
class BackendScorer : public Scorer {
 public:
  BackendScorer(Backend& backend, ScoringMode mode, std::string scorer_id);

  const std::string& id() const override { return id_; }
  ScoringMode mode() const override { return mode_; }

  absl::StatusOr<std::vector<ChoiceScore>> ScoreMasked(
      const Prompt& prompt, std::span<const FillWord> choices) override;
  absl::StatusOr<ChoiceScore> ScoreCausal(const CandidateFill& fill) override;

 private:
  Backend& backend_;
  ScoringMode mode_;
  std::string id_;
};

// Analytic scorers in masked mode. Each assigns a non-negative mass to every
// presented choice and reports log(mass / total mass).
class SyntheticScorer : public Scorer {
 public:
  const std::string& id() const override { return id_; }
  ScoringMode mode() const override { return ScoringMode::kMasked; }

  absl::StatusOr<std::vector<ChoiceScore>> ScoreMasked(
      const Prompt& prompt, std::span<const FillWord> choices) override;
  // Synthetic scorers have no sentence model.
  absl::StatusOr<ChoiceScore> ScoreCausal(const CandidateFill& fill) override;

 protected:
  explicit SyntheticScorer(std::string id) : id_(std::move(id)) {}

  // Unnormalized masses, one per choice.
  virtual absl::StatusOr<std::vector<double>> Masses(
      const Prompt& prompt, std::span<const FillWord> choices) const = 0;

 private:
  std::string id_;
};

// All mass spread evenly over the relevant fills; none on irrelevant fills.
std::unique_ptr<Scorer> MakeIdealLm();

// All mass on one class.
std::unique_ptr<Scorer> MakeFullBiasLm(FillClass direction);

// I.i.d. uniform masses over every choice, a pure function of
// (seed, prompt_id, fill_id).
std::unique_ptr<Scorer> MakeRandomLm(uint64_t seed);

// Configured masses:
//   mass(fill) = class[c] * prod over term subgroups s of subgroup[s][c]
//                         * term[term_id][c]
// where c is the fill's class and missing entries count as 1. JSON form:
//   {"class": {"poor": 2, "rich": 1, "irrelevant": 0.5},
//    "subgroup": {"female": {"poor": 1.5}},
//    "term": {"race.white": {"rich": 3}}}
// Every configured mass must be finite and positive.
struct TableWeights {
  std::map<FillClass, double> class_mass;
  std::map<std::string, std::map<FillClass, double>> subgroup;
  std::map<std::string, std::map<FillClass, double>> term;

  static absl::StatusOr<TableWeights> FromJson(const Json& json);
  Json ToJson() const;
  // The mass the table assigns to a fill of class `c` for a term.
  double Mass(absl::string_view term_id, std::span<const std::string> subgroups,
              FillClass c) const;
};

absl::StatusOr<std::unique_ptr<Scorer>> MakeTableLm(TableWeights weights,
                                                    std::string id = "table_lm");

}  // namespace soceval

#endif  // SOCEVAL_SCORER_H_
