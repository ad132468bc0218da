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

#include "soceval/pipeline.h"

#include <cstdlib>
#include <set>
#include <system_error>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "soceval/report.h"
#include "soceval/status.h"

namespace soceval {
namespace {

absl::Status EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return MakeError(ErrorKind::kIo,
                     absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<Json> ReadJson(const std::filesystem::path& path) {
  SOCEVAL_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat(path.string(), ": invalid JSON"));
  }
  return json;
}

absl::StatusOr<std::vector<Prompt>> LoadSlicedCorpus(const RunConfig& config) {
  std::error_code ec;
  if (!std::filesystem::exists(config.corpus_path, ec)) {
    return MakeError(ErrorKind::kIo, absl::StrCat("corpus ", config.corpus_path.string(),
                                                  " not found; run gen first"));
  }
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<Prompt> prompts,
                           ReadAllPrompts(config.corpus_path));
  SOCEVAL_ASSIGN_OR_RETURN(const Slice slice, ParseSlice(config.slice));
  return ApplySlice(std::move(prompts), slice);
}

// Seconds since the epoch from SOURCE_DATE_EPOCH, when set.
Json CreatedStamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  int64_t seconds = 0;
  if (env != nullptr && absl::SimpleAtoi(env, &seconds)) return seconds;
  return nullptr;
}

}  // namespace

absl::StatusOr<PipelineInputs> LoadInputs(const RunConfig& config) {
  SOCEVAL_ASSIGN_OR_RETURN(Lexicon lexicon, LoadLexicon(config.lexicon_dir));
  CompositionOptions composition;
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<Term> terms, TargetTerms(lexicon, composition));
  std::vector<FillWord> fills = SocioeconomicFills(lexicon);
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<FillWord> irrelevant,
                           LoadIrrelevantSet(config.irrelevant_path));
  fills.insert(fills.end(), irrelevant.begin(), irrelevant.end());
  return PipelineInputs{std::move(lexicon), std::move(terms), std::move(fills)};
}

absl::StatusOr<GenResult> RunGen(const RunConfig& config) {
  SOCEVAL_ASSIGN_OR_RETURN(TemplateSet templates,
                           BuildTemplateSetFromDir(config.templates_dir));
  std::vector<std::string> mismatches;
  const auto counts = templates.CategoryCounts();
  for (TemplateCategory c : kAllCategories) {
    const auto it = counts.find(c);
    const size_t found = it == counts.end() ? 0 : it->second;
    if (found != ExpectedCount(c)) {
      mismatches.push_back(absl::StrCat(CategoryName(c), " expected ", ExpectedCount(c),
                                        ", found ", found));
    }
  }
  if (!mismatches.empty()) {
    return MakeError(ErrorKind::kCountMismatch, absl::StrJoin(mismatches, "; "));
  }
  SOCEVAL_ASSIGN_OR_RETURN(PipelineInputs inputs, LoadInputs(config));
  SOCEVAL_RETURN_IF_ERROR(EnsureDir(config.out_dir));
  SOCEVAL_RETURN_IF_ERROR(EnsureDir(config.corpus_path.parent_path().empty()
                                        ? std::filesystem::path(".")
                                        : config.corpus_path.parent_path()));
  SOCEVAL_RETURN_IF_ERROR(
      WriteFile(config.out_dir / "templates.jsonl", templates.Serialize()));
  CorpusOptions options;
  options.names_all_templates = config.names_all_templates;
  SOCEVAL_ASSIGN_OR_RETURN(
      CorpusSummary corpus,
      WriteCorpus(templates.templates, inputs.terms, options, config.corpus_path));
  Json manifest = {{"templates", templates.Manifest()},
                   {"lexicon", inputs.lexicon.Manifest()},
                   {"target_terms", inputs.terms.size()},
                   {"names_all_templates", config.names_all_templates},
                   {"prompts", corpus.prompts},
                   {"corpus_sha256", corpus.sha256}};
  SOCEVAL_RETURN_IF_ERROR(
      WriteFile(config.out_dir / "gen_manifest.json", manifest.dump(2) + "\n"));
  return GenResult{std::move(templates), std::move(corpus), std::move(manifest)};
}

absl::StatusOr<Json> RunValidate(const RunConfig& config,
                                 const std::optional<std::filesystem::path>& input) {
  Json doc = {{"violations", Json::array()}, {"warnings", Json::array()}};
  auto record = [&](absl::string_view id, absl::string_view text,
                    const ValidationResult& result) {
    for (const Finding& f : result.violations) {
      doc["violations"].push_back({{"id", std::string(id)},
                                   {"text", std::string(text)},
                                   {"code", f.code},
                                   {"detail", f.detail}});
    }
    for (const Finding& f : result.warnings) {
      doc["warnings"].push_back({{"id", std::string(id)},
                                 {"text", std::string(text)},
                                 {"code", f.code},
                                 {"detail", f.detail}});
    }
  };
  size_t checked = 0;
  if (input.has_value()) {
    SOCEVAL_RETURN_IF_ERROR(
        ForEachJsonLine(*input, [&](size_t line, const Json& json) -> absl::Status {
          if (!json.is_object() || !json.contains("text") || !json["text"].is_string()) {
            return MakeError(ErrorKind::kMalformedFile,
                             absl::StrCat(input->string(), ":", line,
                                          ": record needs a \"text\" string"));
          }
          const std::string text = json["text"].get<std::string>();
          const std::string id = json.value("id", absl::StrCat("line", line));
          record(id, text, ValidateTemplate(text));
          ++checked;
          return absl::OkStatus();
        }));
  } else {
    SOCEVAL_ASSIGN_OR_RETURN(TemplateSet templates,
                             BuildTemplateSetFromDir(config.templates_dir));
    for (const Template& t : templates.templates) {
      record(t.id, t.text, ValidateTemplate(t.text));
      ++checked;
    }
    doc["template_set_warnings"] = templates.warnings;
    SOCEVAL_ASSIGN_OR_RETURN(const Lexicon lexicon, LoadLexicon(config.lexicon_dir));
    doc["lexicon"] = lexicon.Manifest();
  }
  doc["checked"] = checked;
  doc["ok"] = doc["violations"].empty();
  return doc;
}

absl::StatusOr<ScoreResult> RunScore(const RunConfig& config,
                                     const RunOptions& options) {
  SOCEVAL_ASSIGN_OR_RETURN(PipelineInputs inputs, LoadInputs(config));
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<Prompt> prompts, LoadSlicedCorpus(config));
  SOCEVAL_ASSIGN_OR_RETURN(ScorerBundle bundle, MakeScorer(config));
  SOCEVAL_RETURN_IF_ERROR(EnsureDir(config.store_path.parent_path().empty()
                                        ? std::filesystem::path(".")
                                        : config.store_path.parent_path()));
  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<ScoreStore> store,
                           ScoreStore::Open(config.store_path));
  ScoreResult result;
  result.scorer_id = bundle.scorer->id();
  result.prompts = prompts.size();
  result.missing_before =
      store->Missing(prompts, inputs.fills, result.scorer_id).size();
  RunOptions run = options;
  run.max_concurrency = config.concurrency;
  SOCEVAL_ASSIGN_OR_RETURN(
      result.summary, RunScoring(*bundle.scorer, prompts, inputs.fills, *store, run));
  return result;
}

absl::StatusOr<Json> RunAnalyze(const RunConfig& config,
                                const std::optional<std::string>& scorer_id) {
  SOCEVAL_ASSIGN_OR_RETURN(PipelineInputs inputs, LoadInputs(config));
  SOCEVAL_ASSIGN_OR_RETURN(const std::vector<Prompt> prompts, LoadSlicedCorpus(config));
  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<ScoreStore> store,
                           ScoreStore::Open(config.store_path));
  std::vector<std::string> ids = store->ScorerIds();
  if (scorer_id.has_value()) {
    if (std::find(ids.begin(), ids.end(), *scorer_id) == ids.end()) {
      return MakeError(ErrorKind::kIncompleteScores,
                       absl::StrCat("no scores for scorer ", *scorer_id));
    }
    ids = {*scorer_id};
  }
  if (ids.empty()) {
    return MakeError(ErrorKind::kIncompleteScores,
                     absl::StrCat("store ", config.store_path.string(), " is empty"));
  }

  Json runs = Json::array();
  Json digests = Json::object();
  for (const std::string& id : ids) {
    const std::vector<ChoiceScore> records = store->Records(id);
    std::set<absl::string_view> scored;
    Sha256 digest;
    for (const ChoiceScore& s : records) {
      scored.insert(s.prompt_id);
      digest.Update(EncodeStoreLine(s));
      digest.Update("\n");
    }
    std::vector<Prompt> members;
    for (const Prompt& p : prompts) {
      if (scored.contains(p.prompt_id)) members.push_back(p);
    }
    if (members.empty()) {
      return MakeError(ErrorKind::kIncompleteScores,
                       absl::StrCat("scorer ", id, " has no scores in the corpus slice"));
    }
    SOCEVAL_ASSIGN_OR_RETURN(
        const std::vector<PromptMetric> metrics,
        ComputePromptMetrics(members, records, inputs.fills, config.els_normalizer));
    AnalysisInput input;
    input.lexicon = &inputs.lexicon;
    input.terms = inputs.terms;
    input.metrics = metrics;
    input.scorer_id = id;
    input.model_id = records.front().model_id;
    input.options = config.metric_options();
    SOCEVAL_ASSIGN_OR_RETURN(Json run, Analyze(input));
    runs.push_back(std::move(run));
    digests[id] = digest.HexDigest();
  }

  SOCEVAL_ASSIGN_OR_RETURN(const std::string corpus_sha256, HashFile(config.corpus_path));
  Json meta = {{"config", config.ToJson()},
               {"seed", config.seed},
               {"corpus_sha256", corpus_sha256},
               {"scores_sha256", digests},
               {"created", CreatedStamp()}};
  Json doc = {{"meta", std::move(meta)}, {"runs", std::move(runs)}};
  SOCEVAL_RETURN_IF_ERROR(EnsureDir(config.out_dir));
  SOCEVAL_RETURN_IF_ERROR(WriteFile(config.out_dir / "analysis.json", doc.dump(2) + "\n"));
  return doc;
}

absl::Status RunReport(const RunConfig& config) {
  ReportInput input;
  SOCEVAL_ASSIGN_OR_RETURN(input.analysis, ReadJson(config.out_dir / "analysis.json"));
  for (const char* attribute : {"gender", "race"}) {
    const auto path = config.out_dir / absl::StrCat("probe_", attribute, ".json");
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) continue;
    SOCEVAL_ASSIGN_OR_RETURN(Json probe, ReadJson(path));
    input.probes.push_back(std::move(probe));
  }
  return WriteReport(input, config.out_dir / "report");
}

absl::StatusOr<std::vector<ProbeSummary>> RunProbeNames(
    const RunConfig& config, const std::vector<ProbeAttribute>& attributes,
    const ProbeOptions& options) {
  SOCEVAL_ASSIGN_OR_RETURN(const Lexicon lexicon, LoadLexicon(config.lexicon_dir));
  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<Backend> backend, MakeBackend(config));
  SOCEVAL_RETURN_IF_ERROR(EnsureDir(config.out_dir));
  std::vector<ProbeSummary> out;
  for (ProbeAttribute attribute : attributes) {
    SOCEVAL_ASSIGN_OR_RETURN(
        ProbeSummary summary,
        NameAttributeProbe(lexicon.names(), *backend, attribute, options));
    SOCEVAL_RETURN_IF_ERROR(WriteFile(
        config.out_dir / absl::StrCat("probe_", ProbeAttributeName(attribute), ".json"),
        summary.ToJson().dump(2) + "\n"));
    out.push_back(std::move(summary));
  }
  return out;
}

absl::StatusOr<std::vector<ReasoningRecord>> RunReasoning(const RunConfig& config,
                                                          int max_tokens) {
  SOCEVAL_ASSIGN_OR_RETURN(const Json analysis, ReadJson(config.out_dir / "analysis.json"));
  std::vector<ReasoningPromptSpec> prompts;
  try {
    const Json& run = analysis.at("runs").at(0);
    for (const Json& p : run.at("reasoning_prompts")) {
      prompts.push_back({p.at("domain").get<std::string>(),
                         p.at("rich_term").get<std::string>(),
                         p.at("poor_term").get<std::string>(),
                         p.at("prompt").get<std::string>()});
    }
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMissingSection,
                     absl::StrCat("analysis.json reasoning prompts: ", e.what()));
  }
  if (prompts.empty()) {
    return MakeError(ErrorKind::kMissingSection, "analysis.json has no reasoning prompts");
  }
  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<Backend> backend, MakeBackend(config));
  constexpr int kSeeds = 5;
  std::vector<uint64_t> seeds;
  for (int i = 0; i < kSeeds; ++i) seeds.push_back(config.seed + static_cast<uint64_t>(i));
  SOCEVAL_ASSIGN_OR_RETURN(std::vector<ReasoningRecord> records,
                           RunReasoningProbe(prompts, *backend, seeds, max_tokens));
  std::string out;
  for (const ReasoningRecord& r : records) absl::StrAppend(&out, r.ToJson().dump(), "\n");
  SOCEVAL_RETURN_IF_ERROR(WriteFile(config.out_dir / "reasoning.jsonl", out));
  return records;
}

}  // namespace soceval
