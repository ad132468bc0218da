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

#ifndef SOCEVAL_STATUS_H_
#define SOCEVAL_STATUS_H_

#include <optional>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace soceval {

// Named failure categories. Every error produced by the library carries one
// of these as a payload so callers (and the CLI exit codes) can branch on it
// without parsing messages.
enum class ErrorKind {
  kDuplicateTerm,
  kMissingSingularForm,
  kMalformedFile,
  kUnsupportedDomainCombination,
  kAdverbNotFound,
  kTransformationNotApplicable,
  kCountMismatch,
  kValidationFailure,
  kMissingSurfaceForm,
  kIo,
  kBackendUnavailable,
  kChoiceNotScorable,
  kEmptyText,
  kInvalidWeights,
  kStoreCorrupt,
  kZeroMass,
  kIncompleteScores,
  kEmptyGroup,
  kPolicyMismatch,
  kMissingSection,
  kInvalidConfig,
};

absl::string_view ErrorKindName(ErrorKind kind);

// Builds a status whose message is "<KindName>: <detail>" and whose payload
// records the kind.
absl::Status MakeError(ErrorKind kind, absl::string_view detail);

// Returns the kind attached by MakeError, if any.
std::optional<ErrorKind> KindOf(const absl::Status& status);

inline bool HasKind(const absl::Status& status, ErrorKind kind) {
  return KindOf(status) == kind;
}

}  // namespace soceval

#define SOCEVAL_STATUS_CONCAT_INNER_(a, b) a##b
#define SOCEVAL_STATUS_CONCAT_(a, b) SOCEVAL_STATUS_CONCAT_INNER_(a, b)

#define SOCEVAL_RETURN_IF_ERROR(expr)          \
  do {                                         \
    const ::absl::Status _st = (expr);         \
    if (!_st.ok()) return _st;                 \
  } while (0)

#define SOCEVAL_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                   \
  if (!tmp.ok()) return tmp.status();                  \
  lhs = std::move(*tmp)

#define SOCEVAL_ASSIGN_OR_RETURN(lhs, expr) \
  SOCEVAL_ASSIGN_OR_RETURN_IMPL_(           \
      SOCEVAL_STATUS_CONCAT_(_statusor_, __LINE__), lhs, expr)

#endif  // SOCEVAL_STATUS_H_
