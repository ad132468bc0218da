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

#include "soceval/http_backend.h"

#include <thread>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "httplib.h"
#include "soceval/status.h"

namespace soceval {
namespace {

constexpr int kHttpOk = 200;
constexpr int kHttpUnprocessable = 422;
constexpr int kHttpUnavailable = 503;

absl::Status MalformedResponse(absl::string_view path, absl::string_view what) {
  return MakeError(ErrorKind::kBackendUnavailable,
                   absl::StrCat("malformed response from ", path, ": ", what));
}

}  // namespace

absl::StatusOr<std::unique_ptr<HttpBackend>> HttpBackend::Create(
    HttpBackendOptions options) {
  absl::string_view url = options.endpoint;
  if (!absl::StartsWith(url, "http://")) {
    return MakeError(ErrorKind::kInvalidConfig,
                     absl::StrCat("endpoint must start with http://, got '",
                                  options.endpoint, "'"));
  }
  if (options.retry.max_attempts < 1) {
    return MakeError(ErrorKind::kInvalidConfig, "retry attempts must be >= 1");
  }
  const size_t slash = url.find('/', 7);
  std::string host(url.substr(0, slash));
  std::string prefix;
  if (slash != absl::string_view::npos) {
    prefix = std::string(absl::StripSuffix(url.substr(slash), "/"));
  }
  if (host.size() <= 7) {
    return MakeError(ErrorKind::kInvalidConfig, "endpoint has no host");
  }
  return std::unique_ptr<HttpBackend>(
      new HttpBackend(std::move(options), std::move(host), std::move(prefix)));
}

HttpBackend::HttpBackend(HttpBackendOptions options, std::string host,
                         std::string prefix)
    : options_(std::move(options)),
      scheme_host_port_(std::move(host)),
      prefix_(std::move(prefix)) {}

absl::StatusOr<Json> HttpBackend::Post(absl::string_view path, const Json& body,
                                       absl::string_view detail) {
  const std::string full_path = absl::StrCat(prefix_, path);
  const std::string payload = body.dump();
  const auto timeout = options_.timeout;
  auto backoff = options_.retry.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<int64_t>(
          static_cast<double>(backoff.count()) * options_.retry.multiplier));
    }
    // One client per request keeps concurrent callers independent.
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    const httplib::Result result =
        client.Post(full_path, payload, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status == kHttpUnavailable) {
      last_error = "HTTP 503";
      continue;
    }
    if (result->status == kHttpUnprocessable) {
      return MakeError(ErrorKind::kChoiceNotScorable,
                       absl::StrCat(detail, ": ", result->body));
    }
    if (result->status != kHttpOk) {
      return MakeError(ErrorKind::kBackendUnavailable,
                       absl::StrCat(full_path, " returned HTTP ", result->status,
                                    ": ", result->body));
    }
    Json json = Json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (!json.is_object()) return MalformedResponse(full_path, "not a JSON object");
    return json;
  }
  return MakeError(ErrorKind::kBackendUnavailable,
                   absl::StrCat(scheme_host_port_, full_path, " failed after ",
                                options_.retry.max_attempts,
                                " attempts: ", last_error));
}

absl::StatusOr<ChoicesResponse> HttpBackend::ScoreChoices(
    absl::string_view text_masked, std::span<const std::string> choices) {
  const Json body = {{"text_masked", std::string(text_masked)},
                     {"mask_token", "[MASK]"},
                     {"choices", Json(std::vector<std::string>(choices.begin(),
                                                               choices.end()))}};
  SOCEVAL_ASSIGN_OR_RETURN(const Json json,
                           Post("/v1/score/choices", body, "choices"));
  try {
    ChoicesResponse r;
    r.logprobs = json.at("logprobs").get<std::vector<double>>();
    r.reduction = json.at("reduction").get<std::string>();
    r.model_id = json.at("model_id").get<std::string>();
    if (r.logprobs.size() != choices.size()) {
      return MalformedResponse("/v1/score/choices",
                               absl::StrCat(r.logprobs.size(), " logprobs for ",
                                            choices.size(), " choices"));
    }
    return r;
  } catch (const Json::exception& e) {
    return MalformedResponse("/v1/score/choices", e.what());
  }
}

absl::StatusOr<SequenceResponse> HttpBackend::ScoreSequence(
    absl::string_view text) {
  if (text.empty()) return MakeError(ErrorKind::kEmptyText, "empty sequence");
  const Json body = {{"text", std::string(text)}};
  SOCEVAL_ASSIGN_OR_RETURN(const Json json,
                           Post("/v1/score/sequence", body, "sequence"));
  try {
    SequenceResponse r;
    r.token_logprobs = json.at("token_logprobs").get<std::vector<double>>();
    r.n_tokens = json.at("n_tokens").get<int>();
    r.model_id = json.at("model_id").get<std::string>();
    if (r.n_tokens != static_cast<int>(r.token_logprobs.size())) {
      return MalformedResponse("/v1/score/sequence",
                               "n_tokens disagrees with token_logprobs");
    }
    return r;
  } catch (const Json::exception& e) {
    return MalformedResponse("/v1/score/sequence", e.what());
  }
}

absl::StatusOr<GenerateResponse> HttpBackend::Generate(absl::string_view prompt,
                                                       int max_tokens,
                                                       uint64_t seed) {
  const Json body = {{"prompt", std::string(prompt)},
                     {"max_tokens", max_tokens},
                     {"seed", seed}};
  SOCEVAL_ASSIGN_OR_RETURN(const Json json, Post("/v1/generate", body, "generate"));
  try {
    return GenerateResponse{json.at("text").get<std::string>(),
                            json.at("model_id").get<std::string>()};
  } catch (const Json::exception& e) {
    return MalformedResponse("/v1/generate", e.what());
  }
}

}  // namespace soceval
