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

// Persistent, resumable score store and the scoring runner that fills it.
//
// The store is an append-only JSON Lines file. Each line is a ChoiceScore
// record with an extra "crc" field holding the CRC-32 (8 lowercase hex
// digits) of the record serialized without that field. Records are keyed by
// (scorer_id, prompt_id, fill_id); a later line for a key replaces an earlier
// one. A trailing line without its newline is the residue of an interrupted
// write and is discarded on open.

#ifndef SOCEVAL_SCORE_STORE_H_
#define SOCEVAL_SCORE_STORE_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "soceval/corpus.h"
#include "soceval/lexicon.h"
#include "soceval/scorer.h"

namespace soceval {

// Serialized store line for `score`, including its checksum.
std::string EncodeStoreLine(const ChoiceScore& score);
// Inverse of EncodeStoreLine. StoreCorrupt on a checksum mismatch or an
// unparseable line.
absl::StatusOr<ChoiceScore> DecodeStoreLine(absl::string_view line);

struct MissingWork {
  std::string prompt_id;
  std::string fill_id;

  friend bool operator==(const MissingWork&, const MissingWork&) = default;
};

class ScoreStore {
 public:
  // Opens (creating if needed) the store at `path` and loads its records.
  static absl::StatusOr<std::unique_ptr<ScoreStore>> Open(
      const std::filesystem::path& path);

  ScoreStore(const ScoreStore&) = delete;
  ScoreStore& operator=(const ScoreStore&) = delete;

  // Stores `score`. A record identical to the stored one is not rewritten.
  // Safe to call concurrently.
  absl::Status Put(const ChoiceScore& score);
  // Stores a batch with one write, so a prompt's scores land together.
  absl::Status PutBatch(std::span<const ChoiceScore> scores);

  std::optional<ChoiceScore> Get(absl::string_view scorer_id,
                                 absl::string_view prompt_id,
                                 absl::string_view fill_id) const;

  // Number of distinct keys.
  size_t size() const;
  // Number of lines appended by this process.
  size_t appended() const;

  // Every (prompt, fill) pair of `prompts` x `fills` without a record for
  // `scorer_id`, in prompt then fill order.
  std::vector<MissingWork> Missing(std::span<const Prompt> prompts,
                                   std::span<const FillWord> fills,
                                   absl::string_view scorer_id) const;

  // Records of one scorer sorted by (prompt_id, fill_id).
  std::vector<ChoiceScore> Records(absl::string_view scorer_id) const;
  // Distinct scorer ids present.
  std::vector<std::string> ScorerIds() const;

  absl::Status Flush();

  const std::filesystem::path& path() const { return path_; }

 private:
  using Key = std::tuple<std::string, std::string, std::string>;

  explicit ScoreStore(std::filesystem::path path);

  absl::Status Load();
  // Returns true when `score` changes the stored state. Requires mu_.
  bool Upsert(const ChoiceScore& score);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<Key, ChoiceScore> records_;
  std::ofstream out_;
  size_t appended_ = 0;
};

// Writes the records of `scorer_id` in key order to a fresh store file.
absl::Status WriteCanonicalStore(const ScoreStore& store,
                                 absl::string_view scorer_id,
                                 const std::filesystem::path& path);

struct RunOptions {
  int max_concurrency = 1;
  // Stop after this many prompts have been scored in this run (used to
  // simulate an interruption).
  std::optional<size_t> stop_after_prompts;
  // Called after every scored prompt with (scored so far, prompts to score).
  std::function<void(size_t, size_t)> progress;
};

struct RunSummary {
  size_t prompts_total = 0;
  size_t prompts_already_complete = 0;
  size_t prompts_scored = 0;
};

// Scores every prompt that still has a missing fill for `scorer` and writes
// the results to `store`. Prompts are scored as a unit so masked choice sets
// are always presented whole. The first scoring error stops the run after
// in-flight work drains; completed prompts stay in the store.
absl::StatusOr<RunSummary> RunScoring(Scorer& scorer,
                                      std::span<const Prompt> prompts,
                                      std::span<const FillWord> fills,
                                      ScoreStore& store,
                                      const RunOptions& options = {});

}  // namespace soceval

#endif  // SOCEVAL_SCORE_STORE_H_
