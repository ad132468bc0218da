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

#include <algorithm>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "soceval/http_backend.h"
#include "soceval/status.h"

namespace soceval {
namespace {

absl::Status Invalid(absl::string_view detail) {
  return MakeError(ErrorKind::kInvalidConfig, detail);
}

absl::StatusOr<Json> ReadJsonFile(const std::filesystem::path& path) {
  SOCEVAL_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(path.string(), ": invalid JSON"));
  }
  return json;
}

}  // namespace

absl::StatusOr<RunConfig> RunConfig::FromJson(const Json& json) {
  if (!json.is_object()) return Invalid("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : json.items()) {
      if (key == "lexicon") {
        c.lexicon_dir = value.get<std::string>();
      } else if (key == "templates") {
        c.templates_dir = value.get<std::string>();
      } else if (key == "irrelevant") {
        c.irrelevant_path = value.get<std::string>();
      } else if (key == "out") {
        c.out_dir = value.get<std::string>();
      } else if (key == "corpus") {
        c.corpus_path = value.get<std::string>();
      } else if (key == "store") {
        c.store_path = value.get<std::string>();
      } else if (key == "scorer") {
        c.scorer = value.get<std::string>();
      } else if (key == "scorer_id") {
        c.scorer_id = value.get<std::string>();
      } else if (key == "mode") {
        SOCEVAL_ASSIGN_OR_RETURN(c.mode, ParseScoringMode(value.get<std::string>()));
      } else if (key == "endpoint") {
        c.endpoint = value.get<std::string>();
      } else if (key == "concurrency") {
        c.concurrency = value.get<int>();
      } else if (key == "timeout_ms") {
        c.timeout_ms = value.get<int>();
      } else if (key == "retry_attempts") {
        c.retry_attempts = value.get<int>();
      } else if (key == "retry_backoff_ms") {
        c.retry_backoff_ms = value.get<int>();
      } else if (key == "policy") {
        SOCEVAL_ASSIGN_OR_RETURN(c.policy, ParsePolicy(value.get<std::string>()));
      } else if (key == "els_normalizer") {
        c.els_normalizer = value.get<bool>();
      } else if (key == "names_all_templates") {
        c.names_all_templates = value.get<bool>();
      } else if (key == "seed") {
        c.seed = value.get<uint64_t>();
      } else if (key == "slice") {
        c.slice = value.get<std::string>();
      } else {
        return Invalid(absl::StrCat("unknown config key '", key, "'"));
      }
    }
  } catch (const Json::exception& e) {
    return Invalid(absl::StrCat("config: ", e.what()));
  }
  return c;
}

Json RunConfig::ToJson() const {
  return Json{{"lexicon", lexicon_dir.string()},
              {"templates", templates_dir.string()},
              {"irrelevant", irrelevant_path.string()},
              {"out", out_dir.string()},
              {"corpus", corpus_path.string()},
              {"store", store_path.string()},
              {"scorer", scorer},
              {"scorer_id", scorer_id},
              {"mode", ScoringModeName(mode)},
              {"endpoint", endpoint},
              {"concurrency", concurrency},
              {"timeout_ms", timeout_ms},
              {"retry_attempts", retry_attempts},
              {"retry_backoff_ms", retry_backoff_ms},
              {"policy", PolicyName(policy)},
              {"els_normalizer", els_normalizer},
              {"names_all_templates", names_all_templates},
              {"seed", seed},
              {"slice", slice}};
}

absl::Status RunConfig::Finalize() {
  if (lexicon_dir.empty()) return Invalid("lexicon directory not set");
  if (templates_dir.empty()) return Invalid("templates directory not set");
  if (irrelevant_path.empty()) irrelevant_path = lexicon_dir / "irrelevant.jsonl";
  if (corpus_path.empty()) corpus_path = out_dir / "corpus.jsonl";
  if (store_path.empty()) store_path = out_dir / "scores.jsonl";
  if (concurrency < 1) return Invalid("concurrency must be >= 1");
  if (timeout_ms < 1) return Invalid("timeout_ms must be >= 1");
  if (retry_attempts < 1) return Invalid("retry_attempts must be >= 1");
  if (retry_backoff_ms < 0) return Invalid("retry_backoff_ms must be >= 0");
  SOCEVAL_RETURN_IF_ERROR(ParseSlice(slice).status());
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path) {
  SOCEVAL_ASSIGN_OR_RETURN(const Json json, ReadJsonFile(path));
  return RunConfig::FromJson(json);
}

bool Slice::Matches(const Prompt& prompt) const {
  return (domains.empty() || domains.contains(prompt.domain)) &&
         (terms.empty() || terms.contains(prompt.term_id)) &&
         (templates.empty() || templates.contains(prompt.template_id));
}

absl::StatusOr<Slice> ParseSlice(absl::string_view expr) {
  Slice slice;
  for (absl::string_view clause : absl::StrSplit(expr, ',', absl::SkipWhitespace())) {
    const std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(clause, absl::MaxSplits('=', 1));
    const absl::string_view key = absl::StripAsciiWhitespace(kv.first);
    const absl::string_view value = absl::StripAsciiWhitespace(kv.second);
    if (value.empty()) {
      return Invalid(absl::StrCat("slice clause '", clause, "' has no value"));
    }
    if (key == "limit") {
      size_t n = 0;
      if (!absl::SimpleAtoi(value, &n)) {
        return Invalid(absl::StrCat("slice limit '", value, "' is not a count"));
      }
      slice.limit = n;
      continue;
    }
    std::set<std::string>* target = key == "domain"     ? &slice.domains
                                    : key == "term"     ? &slice.terms
                                    : key == "template" ? &slice.templates
                                                        : nullptr;
    if (target == nullptr) return Invalid(absl::StrCat("unknown slice key '", key, "'"));
    for (absl::string_view v : absl::StrSplit(value, '|', absl::SkipWhitespace())) {
      target->insert(std::string(absl::StripAsciiWhitespace(v)));
    }
  }
  return slice;
}

std::vector<Prompt> ApplySlice(std::vector<Prompt> prompts, const Slice& slice) {
  std::erase_if(prompts, [&](const Prompt& p) { return !slice.Matches(p); });
  std::sort(prompts.begin(), prompts.end(),
            [](const Prompt& a, const Prompt& b) { return a.prompt_id < b.prompt_id; });
  if (slice.limit && prompts.size() > *slice.limit) prompts.resize(*slice.limit);
  return prompts;
}

absl::StatusOr<std::unique_ptr<Backend>> MakeBackend(const RunConfig& config) {
  if (config.scorer == "http") {
    HttpBackendOptions options;
    options.endpoint = config.endpoint;
    options.timeout = std::chrono::milliseconds(config.timeout_ms);
    options.retry.max_attempts = config.retry_attempts;
    options.retry.initial_backoff = std::chrono::milliseconds(config.retry_backoff_ms);
    if (options.endpoint.empty()) {
      return Invalid("the http scorer needs --endpoint or SOCEVAL_ENDPOINT");
    }
    SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<HttpBackend> backend,
                             HttpBackend::Create(std::move(options)));
    return std::unique_ptr<Backend>(std::move(backend));
  }
  if (absl::StartsWith(config.scorer, "stub:")) {
    const std::filesystem::path path(config.scorer.substr(5));
    SOCEVAL_ASSIGN_OR_RETURN(const Json json, ReadJsonFile(path));
    SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<StubBackend> backend,
                             StubBackend::FromJson(json, "stub"));
    return std::unique_ptr<Backend>(std::move(backend));
  }
  return Invalid(absl::StrCat("scorer '", config.scorer, "' has no wire backend"));
}

absl::StatusOr<ScorerBundle> MakeScorer(const RunConfig& config) {
  ScorerBundle bundle;
  const std::string& s = config.scorer;
  if (s == "ideal") {
    bundle.scorer = MakeIdealLm();
  } else if (s == "random") {
    bundle.scorer = MakeRandomLm(config.seed);
  } else if (s == "full-bias-poor") {
    bundle.scorer = MakeFullBiasLm(FillClass::kPoor);
  } else if (s == "full-bias-rich") {
    bundle.scorer = MakeFullBiasLm(FillClass::kRich);
  } else if (absl::StartsWith(s, "table:")) {
    SOCEVAL_ASSIGN_OR_RETURN(const Json json,
                             ReadJsonFile(std::filesystem::path(s.substr(6))));
    SOCEVAL_ASSIGN_OR_RETURN(TableWeights weights, TableWeights::FromJson(json));
    SOCEVAL_ASSIGN_OR_RETURN(
        bundle.scorer,
        MakeTableLm(std::move(weights),
                    config.scorer_id.empty() ? "table_lm" : config.scorer_id));
  } else if (s == "http" || absl::StartsWith(s, "stub:")) {
    SOCEVAL_ASSIGN_OR_RETURN(bundle.backend, MakeBackend(config));
    const std::string id =
        config.scorer_id.empty()
            ? absl::StrCat(s == "http" ? "http_" : "stub_", ScoringModeName(config.mode))
            : config.scorer_id;
    bundle.scorer = std::make_unique<BackendScorer>(*bundle.backend, config.mode, id);
  } else {
    return Invalid(absl::StrCat("unknown scorer '", s, "'"));
  }
  if (bundle.backend == nullptr && config.mode != ScoringMode::kMasked) {
    return Invalid(absl::StrCat("scorer '", s, "' supports masked mode only"));
  }
  return bundle;
}

}  // namespace soceval
