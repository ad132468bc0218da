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

// Hashing and line-oriented file helpers shared by every module. Files whose
// name ends in ".gz" are transparently gzip-compressed.

#ifndef SOCEVAL_IO_H_
#define SOCEVAL_IO_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace soceval {

using Json = nlohmann::json;

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(absl::string_view data);

// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(absl::string_view data);
  std::string HexDigest();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

uint32_t Crc32(absl::string_view data);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);

// Fixed 3-decimal display rounding used in rendered tables.
std::string FormatDisplay(double value);

class LineWriter {
 public:
  static absl::StatusOr<std::unique_ptr<LineWriter>> Open(
      const std::filesystem::path& path, bool append = false);
  virtual ~LineWriter() = default;

  // Writes `line` followed by '\n'.
  virtual absl::Status WriteLine(absl::string_view line) = 0;
  virtual absl::Status Flush() = 0;
  virtual absl::Status Close() = 0;
};

// Calls `fn(line_number, line)` for each line (1-based, without the '\n').
// `complete` is false only for a trailing line lacking its terminator.
using LineCallback = std::function<absl::Status(
    size_t line_number, absl::string_view line, bool complete)>;
absl::Status ForEachLine(const std::filesystem::path& path,
                         const LineCallback& fn);

// Parses a JSON Lines file. Blank lines are skipped; a parse failure is a
// MalformedFile error naming the file and line.
absl::Status ForEachJsonLine(
    const std::filesystem::path& path,
    const std::function<absl::Status(size_t line_number, const Json&)>& fn);

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status WriteFile(const std::filesystem::path& path,
                       absl::string_view content);

// SHA-256 of the file's bytes.
absl::StatusOr<std::string> HashFile(const std::filesystem::path& path);

}  // namespace soceval

#endif  // SOCEVAL_IO_H_
