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

#include "soceval/corpus.h"

#include <algorithm>
#include <array>
#include <cstring>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "soceval/status.h"

namespace soceval {
namespace {

constexpr size_t kPromptIdHexDigits = 32;

std::string ReplaceFirst(absl::string_view text, absl::string_view token,
                         absl::string_view replacement) {
  const size_t pos = text.find(token);
  if (pos == absl::string_view::npos) return std::string(text);
  return absl::StrCat(text.substr(0, pos), replacement,
                      text.substr(pos + token.size()));
}

// Sort key for streaming writes: the prompt id plus the indices needed to
// rebuild the prompt.
struct CorpusKey {
  std::array<char, kPromptIdHexDigits> id;
  uint32_t template_index;
  uint32_t term_index;

  bool operator<(const CorpusKey& other) const {
    return std::memcmp(id.data(), other.id.data(), id.size()) < 0;
  }
};

}  // namespace

Json Prompt::ToJson() const {
  return Json{{"prompt_id", prompt_id},
              {"template_id", template_id},
              {"term_id", term_id},
              {"text_masked", text_masked},
              {"number_agreement", NumberName(number_agreement)},
              {"group_keys", {{"domain", domain}, {"subgroups", subgroups}}}};
}

absl::StatusOr<Prompt> Prompt::FromJson(const Json& json) {
  if (!json.is_object()) {
    return MakeError(ErrorKind::kMalformedFile, "prompt is not an object");
  }
  try {
    Prompt p;
    p.prompt_id = json.at("prompt_id").get<std::string>();
    p.template_id = json.at("template_id").get<std::string>();
    p.term_id = json.at("term_id").get<std::string>();
    p.text_masked = json.at("text_masked").get<std::string>();
    SOCEVAL_ASSIGN_OR_RETURN(
        p.number_agreement,
        ParseNumber(json.at("number_agreement").get<std::string>()));
    const Json& keys = json.at("group_keys");
    p.domain = keys.at("domain").get<std::string>();
    p.subgroups = keys.at("subgroups").get<std::vector<std::string>>();
    return p;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMalformedFile,
                     absl::StrCat("prompt record: ", e.what()));
  }
}

std::string PromptId(absl::string_view template_id, absl::string_view term_id) {
  return Sha256Hex(absl::StrCat(template_id, "\x1f", term_id))
      .substr(0, kPromptIdHexDigits);
}

bool Pairs(const Template& tmpl, const Term& term, const CorpusOptions& options) {
  return term.domain != Domain::kName || options.names_all_templates ||
         tmpl.number == Number::kSingular;
}

absl::StatusOr<Prompt> Instantiate(const Template& tmpl, const Term& term) {
  const std::string& surface = tmpl.number == Number::kSingular
                                   ? term.surface_singular
                                   : term.surface_plural;
  if (surface.empty()) {
    return MakeError(ErrorKind::kMissingSurfaceForm,
                     absl::StrCat(term.id, " has no ", NumberName(tmpl.number),
                                  " surface for template ", tmpl.id));
  }
  std::string replacement = surface;
  // A sentence-initial slot takes a capitalized surface ("They are ...").
  if (tmpl.text.find_first_not_of(" \t") ==
      tmpl.text.find(kTargetToken.data(), 0, kTargetToken.size())) {
    replacement[0] = absl::ascii_toupper(static_cast<unsigned char>(replacement[0]));
  }
  Prompt p;
  p.prompt_id = PromptId(tmpl.id, term.id);
  p.template_id = tmpl.id;
  p.term_id = term.id;
  p.text_masked = ReplaceFirst(tmpl.text, kTargetToken, replacement);
  p.number_agreement = tmpl.number;
  p.domain = term.DomainKey();
  p.subgroups = term.subgroups;
  return p;
}

size_t ExpectedPromptCount(std::span<const Template> templates,
                           std::span<const Term> terms,
                           const CorpusOptions& options) {
  size_t n = 0;
  for (const Template& tmpl : templates) {
    for (const Term& term : terms) n += Pairs(tmpl, term, options) ? 1 : 0;
  }
  return n;
}

absl::Status Expand(std::span<const Template> templates,
                    std::span<const Term> terms, const CorpusOptions& options,
                    const PromptCallback& fn) {
  for (const Template& tmpl : templates) {
    for (const Term& term : terms) {
      if (!Pairs(tmpl, term, options)) continue;
      SOCEVAL_ASSIGN_OR_RETURN(const Prompt prompt, Instantiate(tmpl, term));
      SOCEVAL_RETURN_IF_ERROR(fn(prompt));
    }
  }
  return absl::OkStatus();
}

std::vector<CandidateFill> InstantiateFills(const Prompt& prompt,
                                            std::span<const FillWord> fills) {
  std::vector<CandidateFill> out;
  out.reserve(fills.size());
  for (const FillWord& fill : fills) {
    out.push_back({prompt.prompt_id, fill.id, fill.surface,
                   ReplaceFirst(prompt.text_masked, kMaskToken, fill.surface),
                   fill.fill_class});
  }
  return out;
}

absl::StatusOr<CorpusSummary> WriteCorpus(std::span<const Template> templates,
                                          std::span<const Term> terms,
                                          const CorpusOptions& options,
                                          const std::filesystem::path& path) {
  std::vector<CorpusKey> keys;
  keys.reserve(ExpectedPromptCount(templates, terms, options));
  for (uint32_t i = 0; i < templates.size(); ++i) {
    for (uint32_t j = 0; j < terms.size(); ++j) {
      if (!Pairs(templates[i], terms[j], options)) continue;
      CorpusKey key{};
      const std::string id = PromptId(templates[i].id, terms[j].id);
      std::memcpy(key.id.data(), id.data(), key.id.size());
      key.template_index = i;
      key.term_index = j;
      keys.push_back(key);
    }
  }
  std::sort(keys.begin(), keys.end());

  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<LineWriter> writer,
                           LineWriter::Open(path));
  for (const CorpusKey& key : keys) {
    SOCEVAL_ASSIGN_OR_RETURN(
        const Prompt prompt,
        Instantiate(templates[key.template_index], terms[key.term_index]));
    SOCEVAL_RETURN_IF_ERROR(writer->WriteLine(prompt.ToJson().dump()));
  }
  SOCEVAL_RETURN_IF_ERROR(writer->Close());
  SOCEVAL_ASSIGN_OR_RETURN(std::string digest, HashFile(path));
  return CorpusSummary{keys.size(), std::move(digest)};
}

absl::StatusOr<CorpusSummary> WritePrompts(std::vector<Prompt> prompts,
                                           const std::filesystem::path& path) {
  std::sort(prompts.begin(), prompts.end(),
            [](const Prompt& a, const Prompt& b) { return a.prompt_id < b.prompt_id; });
  SOCEVAL_ASSIGN_OR_RETURN(std::unique_ptr<LineWriter> writer,
                           LineWriter::Open(path));
  for (const Prompt& prompt : prompts) {
    SOCEVAL_RETURN_IF_ERROR(writer->WriteLine(prompt.ToJson().dump()));
  }
  SOCEVAL_RETURN_IF_ERROR(writer->Close());
  SOCEVAL_ASSIGN_OR_RETURN(std::string digest, HashFile(path));
  return CorpusSummary{prompts.size(), std::move(digest)};
}

absl::Status ReadCorpus(const std::filesystem::path& path,
                        const PromptCallback& fn) {
  return ForEachJsonLine(path, [&](size_t line, const Json& json) -> absl::Status {
    auto prompt = Prompt::FromJson(json);
    if (!prompt.ok()) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat(path.string(), ":", line, ": ",
                                    prompt.status().message()));
    }
    return fn(*prompt);
  });
}

absl::StatusOr<std::vector<Prompt>> ReadAllPrompts(
    const std::filesystem::path& path) {
  std::vector<Prompt> out;
  SOCEVAL_RETURN_IF_ERROR(ReadCorpus(path, [&](const Prompt& p) {
    out.push_back(p);
    return absl::OkStatus();
  }));
  return out;
}

}  // namespace soceval
