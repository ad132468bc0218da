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

// soceval: command-line driver for template generation, scoring, analysis
// and reporting.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "soceval/pipeline.h"
#include "soceval/run_config.h"
#include "soceval/status.h"

namespace soceval {
namespace {

// Exit codes: 1 for uncategorized failures, 10 + kind for library errors.
int ExitCode(const absl::Status& status) {
  const std::optional<ErrorKind> kind = KindOf(status);
  return kind.has_value() ? 10 + static_cast<int>(*kind) : 1;
}

int Fail(const absl::Status& status) {
  std::cerr << "soceval: " << status.message() << "\n";
  return ExitCode(status);
}

struct Flags {
  std::string config;
  std::string lexicon;
  std::string templates;
  std::string irrelevant;
  std::string out;
  std::string corpus;
  std::string store;
  std::string endpoint;
  std::string mode;
  std::string scorer;
  std::string scorer_id;
  std::string policy;
  std::string slice;
  int concurrency = 1;
  int timeout_ms = 0;
  int retries = 0;
  bool resume = false;
  bool els_normalizer = true;
  bool names_all_templates = true;
  uint64_t seed = 0;
};

// Config file first, then every flag given on the command line.
absl::StatusOr<RunConfig> BuildConfig(const CLI::App& app, const Flags& f) {
  RunConfig config;
  config.lexicon_dir = std::filesystem::path(SOCEVAL_DATA_DIR) / "lexicon";
  config.templates_dir = std::filesystem::path(SOCEVAL_DATA_DIR) / "templates";
  if (!f.config.empty()) {
    SOCEVAL_ASSIGN_OR_RETURN(RunConfig loaded, LoadRunConfig(f.config));
    if (loaded.lexicon_dir.empty()) loaded.lexicon_dir = config.lexicon_dir;
    if (loaded.templates_dir.empty()) loaded.templates_dir = config.templates_dir;
    config = std::move(loaded);
  }
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--lexicon")) config.lexicon_dir = f.lexicon;
  if (given("--templates")) config.templates_dir = f.templates;
  if (given("--irrelevant")) config.irrelevant_path = f.irrelevant;
  if (given("--out")) config.out_dir = f.out;
  if (given("--corpus")) config.corpus_path = f.corpus;
  if (given("--store")) config.store_path = f.store;
  if (given("--endpoint")) config.endpoint = f.endpoint;
  if (given("--scorer")) config.scorer = f.scorer;
  if (given("--scorer-id")) config.scorer_id = f.scorer_id;
  if (given("--slice")) config.slice = f.slice;
  if (given("--concurrency")) config.concurrency = f.concurrency;
  if (given("--timeout-ms")) config.timeout_ms = f.timeout_ms;
  if (given("--retries")) config.retry_attempts = f.retries;
  if (given("--els-normalizer")) config.els_normalizer = f.els_normalizer;
  if (given("--names-all-templates")) config.names_all_templates = f.names_all_templates;
  if (given("--seed")) config.seed = f.seed;
  if (given("--mode")) {
    SOCEVAL_ASSIGN_OR_RETURN(config.mode, ParseScoringMode(f.mode));
  }
  if (given("--policy")) {
    SOCEVAL_ASSIGN_OR_RETURN(config.policy, ParsePolicy(f.policy));
  }
  if (config.endpoint.empty()) {
    if (const char* env = std::getenv("SOCEVAL_ENDPOINT"); env != nullptr) {
      config.endpoint = env;
    }
  }
  SOCEVAL_RETURN_IF_ERROR(config.Finalize());
  return config;
}

int RunGenCommand(const RunConfig& config) {
  auto result = RunGen(config);
  if (!result.ok()) return Fail(result.status());
  for (const std::string& w : result->templates.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  const auto counts = result->templates.CategoryCounts();
  for (TemplateCategory c : kAllCategories) {
    const auto it = counts.find(c);
    std::cout << CategoryName(c) << ": " << (it == counts.end() ? 0 : it->second)
              << "\n";
  }
  std::cout << "templates: " << result->templates.templates.size()
            << ", prompts: " << result->corpus.prompts << "\n";
  std::cout << "corpus: " << config.corpus_path.string() << " sha256 "
            << result->corpus.sha256 << "\n";
  return 0;
}

int RunValidateCommand(const RunConfig& config, const std::string& input) {
  auto doc = RunValidate(config, input.empty()
                                     ? std::nullopt
                                     : std::optional<std::filesystem::path>(input));
  if (!doc.ok()) return Fail(doc.status());
  std::cout << doc->dump(2) << "\n";
  if (!(*doc)["ok"].get<bool>()) {
    return Fail(MakeError(ErrorKind::kValidationFailure,
                          absl::StrCat((*doc)["violations"].size(), " violations")));
  }
  return 0;
}

int RunScoreCommand(const RunConfig& config, bool resume,
                    std::optional<size_t> stop_after) {
  RunOptions options;
  options.stop_after_prompts = stop_after;
  size_t last_percent = 0;
  options.progress = [&last_percent](size_t done, size_t total) {
    const size_t percent = total == 0 ? 100 : done * 100 / total;
    if (percent >= last_percent + 10 || done == total) {
      last_percent = percent;
      std::cerr << "scored " << done << "/" << total << " prompts\n";
    }
  };
  auto result = RunScore(config, options);
  if (!result.ok()) return Fail(result.status());
  if (resume) {
    std::cout << "resume: " << result->summary.prompts_already_complete
              << " prompts already complete\n";
  }
  std::cout << "scorer: " << result->scorer_id << ", prompts: " << result->prompts
            << ", scored: " << result->summary.prompts_scored
            << ", store: " << config.store_path.string() << "\n";
  return 0;
}

int RunAnalyzeCommand(const RunConfig& config, const std::string& only) {
  auto doc = RunAnalyze(config, only.empty() ? std::nullopt
                                             : std::optional<std::string>(only));
  if (!doc.ok()) return Fail(doc.status());
  for (const Json& run : (*doc)["runs"]) {
    std::cout << run["scorer_id"].get<std::string>() << ":\n";
    for (const Json& row : run["domain_rows"]) {
      std::cout << "  " << row["group"].get<std::string>()
                << " LMCS=" << FormatDisplay(row["lmcs"].get<double>())
                << " PAR=" << FormatDisplay(row["par"].get<double>())
                << " ELS=" << FormatDisplay(row["els"].get<double>()) << "\n";
    }
  }
  std::cout << "analysis: " << (config.out_dir / "analysis.json").string() << "\n";
  return 0;
}

int RunReportCommand(const RunConfig& config) {
  const absl::Status status = RunReport(config);
  if (!status.ok()) return Fail(status);
  std::cout << "report: " << (config.out_dir / "report").string() << "\n";
  return 0;
}

int RunProbeCommand(const RunConfig& config, const std::string& attribute) {
  std::vector<ProbeAttribute> attributes;
  if (attribute == "gender" || attribute == "both") {
    attributes.push_back(ProbeAttribute::kGender);
  }
  if (attribute == "race" || attribute == "both") {
    attributes.push_back(ProbeAttribute::kRace);
  }
  auto summaries = RunProbeNames(config, attributes);
  if (!summaries.ok()) return Fail(summaries.status());
  for (const ProbeSummary& s : *summaries) {
    std::cout << ProbeAttributeName(s.attribute) << " accuracy: "
              << FormatDisplay(s.accuracy) << " (" << s.results.size()
              << " names)\n";
  }
  return 0;
}

int RunReasoningCommand(const RunConfig& config, int max_tokens) {
  auto records = RunReasoning(config, max_tokens);
  if (!records.ok()) return Fail(records.status());
  std::cout << "reasoning records: " << records->size() << " -> "
            << (config.out_dir / "reasoning.jsonl").string() << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Socioeconomic bias evaluation of language models"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration; flags override it");
  app.add_option("--lexicon", f.lexicon, "Lexicon directory");
  app.add_option("--templates", f.templates, "Templates directory");
  app.add_option("--irrelevant", f.irrelevant, "Irrelevant fill set (JSON Lines)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--corpus", f.corpus, "Corpus path (default <out>/corpus.jsonl)");
  app.add_option("--store", f.store, "Score store path (default <out>/scores.jsonl)");
  app.add_option("--endpoint", f.endpoint, "Model server URL (default $SOCEVAL_ENDPOINT)");
  app.add_option("--mode", f.mode, "Scoring mode")->check(CLI::IsMember({"masked", "causal"}));
  app.add_option("--scorer", f.scorer,
                 "ideal | random | full-bias-poor | full-bias-rich | table:<file> | "
                 "stub:<file> | http");
  app.add_option("--scorer-id", f.scorer_id, "Scorer id for table, stub and http scorers");
  app.add_option("--concurrency", f.concurrency, "In-flight scoring requests");
  app.add_option("--timeout-ms", f.timeout_ms, "HTTP timeout in milliseconds");
  app.add_option("--retries", f.retries, "HTTP attempts per request");
  app.add_flag("--resume", f.resume, "Continue an interrupted scoring run");
  app.add_option("--policy", f.policy, "Aggregation policy")
      ->check(CLI::IsMember({"macro", "micro"}));
  app.add_option("--els-normalizer", f.els_normalizer, "Divide ELS by 0.5 (true|false)");
  app.add_option("--names-all-templates", f.names_all_templates,
                 "Pair names with every template (true|false)");
  app.add_option("--seed", f.seed, "Seed for random scorers and generation");
  app.add_option("--slice", f.slice, "Prompt subset, e.g. domain=gender|neutral,limit=1000");

  CLI::App* gen = app.add_subcommand("gen", "Build templates and the prompt corpus");
  CLI::App* validate = app.add_subcommand("validate", "Validate templates and lexicon");
  std::string validate_input;
  validate->add_option("--input", validate_input,
                       "JSON Lines of {\"text\"} records to validate instead");
  CLI::App* score = app.add_subcommand("score", "Score the corpus into the store");
  size_t stop_after = 0;
  score->add_option("--stop-after-prompts", stop_after,
                    "Stop after scoring this many prompts");
  CLI::App* analyze = app.add_subcommand("analyze", "Compute metrics and analyses");
  std::string only_scorer;
  analyze->add_option("--only", only_scorer, "Analyze a single scorer id");
  CLI::App* report = app.add_subcommand("report", "Render the report directory");
  CLI::App* probe = app.add_subcommand("probe-names", "Run the name attribute probe");
  std::string attribute = "both";
  probe->add_option("--attribute", attribute, "gender | race | both")
      ->check(CLI::IsMember({"gender", "race", "both"}));
  CLI::App* reasoning =
      app.add_subcommand("reasoning-probe", "Dispatch reasoning probe prompts");
  int max_tokens = 64;
  reasoning->add_option("--max-tokens", max_tokens, "Tokens to generate per prompt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto config = BuildConfig(app, f);
  if (!config.ok()) return Fail(config.status());

  if (gen->parsed()) return RunGenCommand(*config);
  if (validate->parsed()) return RunValidateCommand(*config, validate_input);
  if (score->parsed()) {
    return RunScoreCommand(*config, f.resume,
                           score->count("--stop-after-prompts") > 0
                               ? std::optional<size_t>(stop_after)
                               : std::nullopt);
  }
  if (analyze->parsed()) return RunAnalyzeCommand(*config, only_scorer);
  if (report->parsed()) return RunReportCommand(*config);
  if (probe->parsed()) return RunProbeCommand(*config, attribute);
  if (reasoning->parsed()) return RunReasoningCommand(*config, max_tokens);
  return 1;
}

}  // namespace
}  // namespace soceval

int main(int argc, char** argv) { return soceval::Main(argc, argv); }
