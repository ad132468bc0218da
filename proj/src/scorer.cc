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
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "soceval/status.h"

namespace soceval {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Json NullableDouble(double value) {
  return std::isfinite(value) ? Json(value) : Json(nullptr);
}

double ReadNullableDouble(const Json& json) {
  return json.is_null() ? kNegInf : json.get<double>();
}

absl::StatusOr<std::map<FillClass, double>> ParseClassMasses(
    const Json& json, absl::string_view where) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kInvalidWeights,
                     absl::StrCat(where, ": expected an object"));
  }
  std::map<FillClass, double> out;
  for (const auto& [name, value] : json.items()) {
    auto fill_class = ParseFillClass(name);
    if (!fill_class.ok()) {
      return MakeError(ErrorKind::kInvalidWeights,
                       absl::StrCat(where, ": unknown class '", name, "'"));
    }
    if (!value.is_number() || !std::isfinite(value.get<double>()) ||
        value.get<double>() <= 0.0) {
      return MakeError(ErrorKind::kInvalidWeights,
                       absl::StrCat(where, ".", name, ": mass must be positive, got ",
                                    value.dump()));
    }
    out[*fill_class] = value.get<double>();
  }
  return out;
}

Json ClassMassesToJson(const std::map<FillClass, double>& masses) {
  Json out = Json::object();
  for (const auto& [c, m] : masses) out[std::string(FillClassName(c))] = m;
  return out;
}

class IdealLm : public SyntheticScorer {
 public:
  IdealLm() : SyntheticScorer("ideal_lm") {}

 protected:
  absl::StatusOr<std::vector<double>> Masses(
      const Prompt&, std::span<const FillWord> choices) const override {
    std::vector<double> out;
    for (const FillWord& c : choices) out.push_back(c.relevant() ? 1.0 : 0.0);
    return out;
  }
};

class FullBiasLm : public SyntheticScorer {
 public:
  explicit FullBiasLm(FillClass direction)
      : SyntheticScorer(absl::StrCat("full_bias_lm_", FillClassName(direction))),
        direction_(direction) {}

 protected:
  absl::StatusOr<std::vector<double>> Masses(
      const Prompt&, std::span<const FillWord> choices) const override {
    std::vector<double> out;
    for (const FillWord& c : choices) {
      out.push_back(c.fill_class == direction_ ? 1.0 : 0.0);
    }
    return out;
  }

 private:
  FillClass direction_;
};

class RandomLm : public SyntheticScorer {
 public:
  explicit RandomLm(uint64_t seed)
      : SyntheticScorer(absl::StrCat("random_lm_", seed)), seed_(seed) {}

 protected:
  absl::StatusOr<std::vector<double>> Masses(
      const Prompt& prompt, std::span<const FillWord> choices) const override {
    std::vector<double> out;
    for (const FillWord& c : choices) {
      const std::string digest =
          Sha256Hex(absl::StrCat(seed_, "\x1f", prompt.prompt_id, "\x1f", c.id));
      std::mt19937_64 rng(std::stoull(digest.substr(0, 16), nullptr, 16));
      // Uniform on (0, 1].
      out.push_back(1.0 - std::generate_canonical<double, 53>(rng));
    }
    return out;
  }

 private:
  uint64_t seed_;
};

class TableLm : public SyntheticScorer {
 public:
  TableLm(TableWeights weights, std::string id)
      : SyntheticScorer(std::move(id)), weights_(std::move(weights)) {}

 protected:
  absl::StatusOr<std::vector<double>> Masses(
      const Prompt& prompt, std::span<const FillWord> choices) const override {
    std::vector<double> out;
    for (const FillWord& c : choices) {
      out.push_back(weights_.Mass(prompt.term_id, prompt.subgroups, c.fill_class));
    }
    return out;
  }

 private:
  TableWeights weights_;
};

}  // namespace

absl::string_view ScoringModeName(ScoringMode mode) {
  return mode == ScoringMode::kMasked ? "masked" : "causal";
}

absl::StatusOr<ScoringMode> ParseScoringMode(absl::string_view name) {
  if (name == "masked") return ScoringMode::kMasked;
  if (name == "causal") return ScoringMode::kCausal;
  return MakeError(ErrorKind::kInvalidConfig,
                   absl::StrCat("unknown scoring mode '", name, "'"));
}

Json ChoiceScore::ToJson() const {
  return Json{{"prompt_id", prompt_id},
              {"fill_id", fill_id},
              {"logprob", NullableDouble(logprob)},
              {"sum_logprob", NullableDouble(sum_logprob)},
              {"n_tokens", n_tokens},
              {"mode", ScoringModeName(mode)},
              {"scorer_id", scorer_id},
              {"model_id", model_id},
              {"reduction", reduction}};
}

absl::StatusOr<ChoiceScore> ChoiceScore::FromJson(const Json& json) {
  try {
    ChoiceScore s;
    s.prompt_id = json.at("prompt_id").get<std::string>();
    s.fill_id = json.at("fill_id").get<std::string>();
    s.logprob = ReadNullableDouble(json.at("logprob"));
    s.sum_logprob = ReadNullableDouble(json.at("sum_logprob"));
    s.n_tokens = json.at("n_tokens").get<int>();
    SOCEVAL_ASSIGN_OR_RETURN(s.mode,
                             ParseScoringMode(json.at("mode").get<std::string>()));
    s.scorer_id = json.at("scorer_id").get<std::string>();
    s.model_id = json.value("model_id", "");
    s.reduction = json.value("reduction", "");
    return s;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat("score record: ", e.what()));
  }
}

StubBackend::StubBackend(std::map<std::string, double> masses,
                         std::string model_id, double default_mass)
    : masses_(std::move(masses)),
      model_id_(std::move(model_id)),
      default_mass_(default_mass) {}

absl::StatusOr<std::unique_ptr<StubBackend>> StubBackend::FromJson(
    const Json& json, std::string model_id) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kInvalidWeights, "stub table must be an object");
  }
  std::map<std::string, double> masses;
  for (const auto& [surface, value] : json.items()) {
    if (!value.is_number() || value.get<double>() < 0.0) {
      return MakeError(ErrorKind::kInvalidWeights,
                       absl::StrCat("stub mass for '", surface, "' must be >= 0"));
    }
    masses[surface] = value.get<double>();
  }
  return std::make_unique<StubBackend>(std::move(masses), std::move(model_id));
}

absl::StatusOr<ChoicesResponse> StubBackend::ScoreChoices(
    absl::string_view, std::span<const std::string> choices) {
  ChoicesResponse response{{}, "none", model_id_};
  for (const std::string& choice : choices) {
    const auto it = masses_.find(choice);
    if (it == masses_.end()) {
      return MakeError(ErrorKind::kChoiceNotScorable, choice);
    }
    response.logprobs.push_back(std::log(it->second));
  }
  return response;
}

absl::StatusOr<SequenceResponse> StubBackend::ScoreSequence(
    absl::string_view text) {
  SequenceResponse response{{}, 0, model_id_};
  for (absl::string_view token : absl::StrSplit(text, ' ', absl::SkipEmpty())) {
    const auto it = masses_.find(std::string(token));
    response.token_logprobs.push_back(
        std::log(it == masses_.end() ? default_mass_ : it->second));
  }
  response.n_tokens = static_cast<int>(response.token_logprobs.size());
  return response;
}

absl::StatusOr<GenerateResponse> StubBackend::Generate(absl::string_view prompt,
                                                       int max_tokens,
                                                       uint64_t seed) {
  const std::string digest =
      Sha256Hex(absl::StrCat(seed, "\x1f", max_tokens, "\x1f", prompt));
  return GenerateResponse{absl::StrCat(" stub continuation ", digest.substr(0, 8)),
                          model_id_};
}

absl::StatusOr<std::vector<ChoiceScore>> ScorePrompt(
    Scorer& scorer, const Prompt& prompt, std::span<const FillWord> choices) {
  if (scorer.mode() == ScoringMode::kMasked) {
    return scorer.ScoreMasked(prompt, choices);
  }
  std::vector<ChoiceScore> out;
  for (const CandidateFill& fill : InstantiateFills(prompt, choices)) {
    SOCEVAL_ASSIGN_OR_RETURN(ChoiceScore score, scorer.ScoreCausal(fill));
    out.push_back(std::move(score));
  }
  return out;
}

BackendScorer::BackendScorer(Backend& backend, ScoringMode mode,
                             std::string scorer_id)
    : backend_(backend), mode_(mode), id_(std::move(scorer_id)) {}

absl::StatusOr<std::vector<ChoiceScore>> BackendScorer::ScoreMasked(
    const Prompt& prompt, std::span<const FillWord> choices) {
  std::vector<ChoiceScore> out;
  if (choices.empty()) return out;
  std::vector<std::string> surfaces;
  for (const FillWord& c : choices) surfaces.push_back(c.surface);
  SOCEVAL_ASSIGN_OR_RETURN(ChoicesResponse response,
                           backend_.ScoreChoices(prompt.text_masked, surfaces));
  if (response.logprobs.size() != choices.size()) {
    return MakeError(ErrorKind::kBackendUnavailable,
                     absl::StrCat("backend returned ", response.logprobs.size(),
                                  " logprobs for ", choices.size(), " choices"));
  }
  for (size_t i = 0; i < choices.size(); ++i) {
    ChoiceScore s;
    s.prompt_id = prompt.prompt_id;
    s.fill_id = choices[i].id;
    s.logprob = response.logprobs[i];
    s.sum_logprob = response.logprobs[i];
    s.n_tokens = 1;
    s.mode = ScoringMode::kMasked;
    s.scorer_id = id_;
    s.model_id = response.model_id;
    s.reduction = response.reduction;
    out.push_back(std::move(s));
  }
  return out;
}

absl::StatusOr<ChoiceScore> BackendScorer::ScoreCausal(const CandidateFill& fill) {
  if (fill.filled_text.empty()) {
    return MakeError(ErrorKind::kEmptyText, fill.prompt_id);
  }
  SOCEVAL_ASSIGN_OR_RETURN(SequenceResponse response,
                           backend_.ScoreSequence(fill.filled_text));
  if (response.token_logprobs.empty()) {
    return MakeError(ErrorKind::kEmptyText,
                     absl::StrCat(fill.prompt_id, ": backend returned no tokens"));
  }
  double sum = 0.0;
  for (double lp : response.token_logprobs) sum += lp;
  const int n = static_cast<int>(response.token_logprobs.size());
  ChoiceScore s;
  s.prompt_id = fill.prompt_id;
  s.fill_id = fill.fill_id;
  s.logprob = sum / n;
  s.sum_logprob = sum;
  s.n_tokens = n;
  s.mode = ScoringMode::kCausal;
  s.scorer_id = id_;
  s.model_id = response.model_id;
  s.reduction = "mean_token_logprob";
  return s;
}

absl::StatusOr<std::vector<ChoiceScore>> SyntheticScorer::ScoreMasked(
    const Prompt& prompt, std::span<const FillWord> choices) {
  std::vector<ChoiceScore> out;
  if (choices.empty()) return out;
  SOCEVAL_ASSIGN_OR_RETURN(const std::vector<double> masses,
                           Masses(prompt, choices));
  double total = 0.0;
  for (double m : masses) total += m;
  for (size_t i = 0; i < choices.size(); ++i) {
    ChoiceScore s;
    s.prompt_id = prompt.prompt_id;
    s.fill_id = choices[i].id;
    s.logprob = total > 0.0 && masses[i] > 0.0 ? std::log(masses[i] / total)
                                                : kNegInf;
    s.sum_logprob = s.logprob;
    s.n_tokens = 1;
    s.mode = ScoringMode::kMasked;
    s.scorer_id = id();
    s.model_id = id();
    s.reduction = "analytic";
    out.push_back(std::move(s));
  }
  return out;
}

absl::StatusOr<ChoiceScore> SyntheticScorer::ScoreCausal(const CandidateFill&) {
  return MakeError(ErrorKind::kInvalidConfig,
                   absl::StrCat(id(), " scores masked mode only"));
}

std::unique_ptr<Scorer> MakeIdealLm() { return std::make_unique<IdealLm>(); }

std::unique_ptr<Scorer> MakeFullBiasLm(FillClass direction) {
  return std::make_unique<FullBiasLm>(direction);
}

std::unique_ptr<Scorer> MakeRandomLm(uint64_t seed) {
  return std::make_unique<RandomLm>(seed);
}

absl::StatusOr<TableWeights> TableWeights::FromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kInvalidWeights, "weights must be an object");
  }
  TableWeights w;
  for (const auto& [key, value] : json.items()) {
    if (key == "class") {
      SOCEVAL_ASSIGN_OR_RETURN(w.class_mass, ParseClassMasses(value, "class"));
    } else if (key == "subgroup" || key == "term") {
      if (!value.is_object()) {
        return MakeError(ErrorKind::kInvalidWeights,
                         absl::StrCat(key, ": expected an object"));
      }
      auto& dest = key == "subgroup" ? w.subgroup : w.term;
      for (const auto& [name, masses] : value.items()) {
        SOCEVAL_ASSIGN_OR_RETURN(dest[name],
                                 ParseClassMasses(masses, absl::StrCat(key, ".", name)));
      }
    } else {
      return MakeError(ErrorKind::kInvalidWeights,
                       absl::StrCat("unknown weights section '", key, "'"));
    }
  }
  return w;
}

Json TableWeights::ToJson() const {
  Json json = {{"class", ClassMassesToJson(class_mass)},
               {"subgroup", Json::object()},
               {"term", Json::object()}};
  for (const auto& [name, masses] : subgroup) {
    json["subgroup"][name] = ClassMassesToJson(masses);
  }
  for (const auto& [name, masses] : term) {
    json["term"][name] = ClassMassesToJson(masses);
  }
  return json;
}

double TableWeights::Mass(absl::string_view term_id,
                          std::span<const std::string> subgroups,
                          FillClass c) const {
  auto lookup = [c](const std::map<FillClass, double>& masses) {
    const auto it = masses.find(c);
    return it == masses.end() ? 1.0 : it->second;
  };
  double mass = lookup(class_mass);
  for (const std::string& s : subgroups) {
    if (const auto it = subgroup.find(s); it != subgroup.end()) {
      mass *= lookup(it->second);
    }
  }
  if (const auto it = term.find(std::string(term_id)); it != term.end()) {
    mass *= lookup(it->second);
  }
  return mass;
}

absl::StatusOr<std::unique_ptr<Scorer>> MakeTableLm(TableWeights weights,
                                                    std::string id) {
  auto check = [](const std::map<FillClass, double>& masses,
                  absl::string_view where) -> absl::Status {
    for (const auto& [c, m] : masses) {
      if (!std::isfinite(m) || m <= 0.0) {
        return MakeError(ErrorKind::kInvalidWeights,
                         absl::StrCat(where, ".", FillClassName(c),
                                      ": mass must be positive"));
      }
    }
    return absl::OkStatus();
  };
  SOCEVAL_RETURN_IF_ERROR(check(weights.class_mass, "class"));
  for (const auto& [name, masses] : weights.subgroup) {
    SOCEVAL_RETURN_IF_ERROR(check(masses, absl::StrCat("subgroup.", name)));
  }
  for (const auto& [name, masses] : weights.term) {
    SOCEVAL_RETURN_IF_ERROR(check(masses, absl::StrCat("term.", name)));
  }
  return std::unique_ptr<Scorer>(
      std::make_unique<TableLm>(std::move(weights), std::move(id)));
}

}  // namespace soceval
