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

// JSON-over-HTTP client for the model wire protocol:
//
//   POST /v1/score/choices  {"text_masked", "mask_token", "choices"}
//                           -> {"logprobs", "reduction", "model_id"}
//   POST /v1/score/sequence {"text"} -> {"token_logprobs", "n_tokens", "model_id"}
//   POST /v1/generate       {"prompt", "max_tokens", "seed"} -> {"text", "model_id"}
//
// HTTP 503 and transport failures are retried with exponential backoff; HTTP
// 422 maps to ChoiceNotScorable.

#ifndef SOCEVAL_HTTP_BACKEND_H_
#define SOCEVAL_HTTP_BACKEND_H_

#include <chrono>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "soceval/io.h"
#include "soceval/scorer.h"

namespace soceval {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
};

struct HttpBackendOptions {
  // Base URL such as "http://127.0.0.1:8080" or "http://host/prefix".
  std::string endpoint;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
};

class HttpBackend : public Backend {
 public:
  // InvalidConfig when the endpoint is not an http URL.
  static absl::StatusOr<std::unique_ptr<HttpBackend>> Create(
      HttpBackendOptions options);

  absl::StatusOr<ChoicesResponse> ScoreChoices(
      absl::string_view text_masked,
      std::span<const std::string> choices) override;
  absl::StatusOr<SequenceResponse> ScoreSequence(absl::string_view text) override;
  absl::StatusOr<GenerateResponse> Generate(absl::string_view prompt,
                                            int max_tokens,
                                            uint64_t seed) override;

 private:
  HttpBackend(HttpBackendOptions options, std::string host, std::string prefix);

  // POSTs `body` to `path` and returns the parsed response object.
  absl::StatusOr<Json> Post(absl::string_view path, const Json& body,
                            absl::string_view detail);

  HttpBackendOptions options_;
  std::string scheme_host_port_;
  std::string prefix_;
};

}  // namespace soceval

#endif  // SOCEVAL_HTTP_BACKEND_H_
