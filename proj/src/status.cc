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

#include "soceval/status.h"

#include <array>
#include <string>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace soceval {
namespace {

constexpr char kPayloadUrl[] = "type.soceval/error_kind";

constexpr std::array<std::pair<ErrorKind, absl::string_view>, 21> kNames = {{
    {ErrorKind::kDuplicateTerm, "DuplicateTerm"},
    {ErrorKind::kMissingSingularForm, "MissingSingularForm"},
    {ErrorKind::kMalformedFile, "MalformedFile"},
    {ErrorKind::kUnsupportedDomainCombination, "UnsupportedDomainCombination"},
    {ErrorKind::kAdverbNotFound, "AdverbNotFound"},
    {ErrorKind::kTransformationNotApplicable, "TransformationNotApplicable"},
    {ErrorKind::kCountMismatch, "CountMismatch"},
    {ErrorKind::kValidationFailure, "ValidationFailure"},
    {ErrorKind::kMissingSurfaceForm, "MissingSurfaceForm"},
    {ErrorKind::kIo, "IoError"},
    {ErrorKind::kBackendUnavailable, "BackendUnavailable"},
    {ErrorKind::kChoiceNotScorable, "ChoiceNotScorable"},
    {ErrorKind::kEmptyText, "EmptyText"},
    {ErrorKind::kInvalidWeights, "InvalidWeights"},
    {ErrorKind::kStoreCorrupt, "StoreCorrupt"},
    {ErrorKind::kZeroMass, "ZeroMass"},
    {ErrorKind::kIncompleteScores, "IncompleteScores"},
    {ErrorKind::kEmptyGroup, "EmptyGroup"},
    {ErrorKind::kPolicyMismatch, "PolicyMismatch"},
    {ErrorKind::kMissingSection, "MissingSection"},
    {ErrorKind::kInvalidConfig, "InvalidConfig"},
}};

absl::StatusCode CanonicalCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kBackendUnavailable:
      return absl::StatusCode::kUnavailable;
    case ErrorKind::kStoreCorrupt:
      return absl::StatusCode::kDataLoss;
    case ErrorKind::kIncompleteScores:
    case ErrorKind::kMissingSection:
    case ErrorKind::kEmptyGroup:
      return absl::StatusCode::kFailedPrecondition;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, absl::string_view detail) {
  absl::Status status(CanonicalCode(kind),
                      absl::StrCat(ErrorKindName(kind), ": ", detail));
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> KindOf(const absl::Status& status) {
  const auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

}  // namespace soceval
